pub mod acceptance;
pub mod attacks;
pub mod bounds;
pub mod dense;
pub mod error;
pub mod experiment;
pub mod games;
pub mod gf2;
pub mod perm;
pub mod rng;
pub mod statevector;

pub use error::{Error, Result};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/statevector.md")]
    mod statevector {}
    #[doc = include_str!("../../../book/src/cipher.md")]
    mod cipher {}
    #[doc = include_str!("../../../book/src/games.md")]
    mod games {}
    #[doc = include_str!("../../../book/src/lemmas.md")]
    mod lemmas {}
    #[doc = include_str!("../../../book/src/attacks.md")]
    mod attacks {}
    #[doc = include_str!("../../../book/src/experiments.md")]
    mod experiments {}
    #[doc = include_str!("../../../book/src/acceptance.md")]
    mod acceptance {}
}
