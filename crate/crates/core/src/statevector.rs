//! Pure-state simulator over named registers.
//!
//! Amplitudes live in one flat array indexed by the concatenation of all
//! register values in declaration order, with register 0 in the most
//! significant bits. A layout `{X: 2, Y: 1}` therefore stores `|x⟩|y⟩` at
//! index `x << 1 | y`.
//!
//! Only what the games and attacks need is here: Hadamard layers, XOR and
//! phase oracles given by classical tables or predicates, a controlled XOR
//! oracle, the Grover diffusion, and projective measurement of one register.
//! Mixed states are never formed; measuring samples an outcome and collapses.

use std::env;

use num_complex::Complex64;
use rand::Rng;

use crate::error::{Error, Result};

/// Default ceiling on the total number of simulated qubits.
pub const DEFAULT_MAX_QUBITS: usize = 28;

/// Environment variable overriding [`DEFAULT_MAX_QUBITS`].
pub const MAX_QUBITS_ENV: &str = "QEMLAB_MAX_QUBITS";

/// Norm drift tolerated after any operation.
pub const NORM_TOLERANCE: f64 = 1e-9;

/// The active qubit cap: `QEMLAB_MAX_QUBITS` when set and parseable, else 28.
pub fn max_qubits() -> usize {
    env::var(MAX_QUBITS_ENV)
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(DEFAULT_MAX_QUBITS)
}

/// One named register inside a [`RegisterLayout`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Register {
    name: String,
    width: usize,
    shift: usize,
}

impl Register {
    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn width(&self) -> usize {
        self.width
    }

    /// Position of the register's least significant bit in a basis index.
    pub fn shift(&self) -> usize {
        self.shift
    }

    pub fn mask(&self) -> u64 {
        (1u64 << self.width) - 1
    }

    #[inline]
    fn extract(&self, index: usize) -> u64 {
        ((index >> self.shift) as u64) & self.mask()
    }
}

/// Ordered list of named registers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RegisterLayout {
    registers: Vec<Register>,
    total_qubits: usize,
}

impl RegisterLayout {
    /// Builds a layout under the active qubit cap (see [`max_qubits`]).
    pub fn new<S: AsRef<str>>(registers: &[(S, usize)]) -> Result<Self> {
        Self::with_cap(registers, max_qubits())
    }

    pub fn with_cap<S: AsRef<str>>(registers: &[(S, usize)], cap: usize) -> Result<Self> {
        let total: usize = registers.iter().map(|(_, w)| *w).sum();
        if total > cap {
            return Err(Error::QubitCap {
                requested: total,
                cap,
            });
        }
        let mut out = Vec::with_capacity(registers.len());
        let mut consumed = 0;
        for (name, width) in registers {
            let name = name.as_ref();
            if *width == 0 {
                return Err(Error::ZeroWidthRegister(name.to_string()));
            }
            if out.iter().any(|r: &Register| r.name == name) {
                return Err(Error::DuplicateRegister(name.to_string()));
            }
            consumed += width;
            out.push(Register {
                name: name.to_string(),
                width: *width,
                shift: total - consumed,
            });
        }
        Ok(Self {
            registers: out,
            total_qubits: total,
        })
    }

    pub fn total_qubits(&self) -> usize {
        self.total_qubits
    }

    /// Number of basis states, `2^total_qubits`.
    pub fn dimension(&self) -> usize {
        1usize << self.total_qubits
    }

    pub fn registers(&self) -> &[Register] {
        &self.registers
    }

    pub fn register(&self, name: &str) -> Result<&Register> {
        self.registers
            .iter()
            .find(|r| r.name == name)
            .ok_or_else(|| Error::UnknownRegister(name.to_string()))
    }

    /// Basis index for one value per register, in declaration order.
    pub fn index_of(&self, values: &[u64]) -> Result<usize> {
        if values.len() != self.registers.len() {
            return Err(Error::WrongValueCount {
                register: self
                    .registers
                    .iter()
                    .map(|r| r.name.as_str())
                    .collect::<Vec<_>>()
                    .join(","),
                expected: self.registers.len(),
                got: values.len(),
            });
        }
        let mut index = 0usize;
        for (reg, &v) in self.registers.iter().zip(values) {
            if v > reg.mask() {
                return Err(Error::ValueTooWide {
                    register: reg.name.clone(),
                    value: v,
                    width: reg.width,
                });
            }
            index |= (v as usize) << reg.shift;
        }
        Ok(index)
    }
}

/// Normalized amplitude vector over a [`RegisterLayout`].
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    layout: RegisterLayout,
    amplitudes: Vec<Complex64>,
}

impl StateVector {
    /// `|v_0⟩|v_1⟩…` with one value per register.
    pub fn basis(layout: RegisterLayout, values: &[u64]) -> Result<Self> {
        let index = layout.index_of(values)?;
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); layout.dimension()];
        amplitudes[index] = Complex64::new(1.0, 0.0);
        Ok(Self { layout, amplitudes })
    }

    /// All registers in `|0⟩`.
    pub fn zero(layout: RegisterLayout) -> Self {
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); layout.dimension()];
        amplitudes[0] = Complex64::new(1.0, 0.0);
        Self { layout, amplitudes }
    }

    /// `H^{⊗w}` applied to [`zero`](Self::zero) on `register`: the uniform
    /// superposition over its values, other registers in `|0⟩`.
    pub fn uniform(layout: RegisterLayout, register: &str) -> Result<Self> {
        let reg = layout.register(register)?.clone();
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); layout.dimension()];
        let amp = Complex64::new(1.0 / ((1u64 << reg.width) as f64).sqrt(), 0.0);
        for v in 0..1usize << reg.width {
            amplitudes[v << reg.shift] = amp;
        }
        Ok(Self { layout, amplitudes })
    }

    /// Wraps raw amplitudes; they must already be normalized.
    pub fn from_amplitudes(layout: RegisterLayout, amplitudes: Vec<Complex64>) -> Result<Self> {
        if amplitudes.len() != layout.dimension() {
            return Err(Error::DimensionMismatch {
                expected: layout.dimension(),
                got: amplitudes.len(),
            });
        }
        let state = Self { layout, amplitudes };
        let norm = state.norm_sqr();
        if (norm - 1.0).abs() > NORM_TOLERANCE {
            return Err(Error::NotNormalized(norm));
        }
        Ok(state)
    }

    pub fn layout(&self) -> &RegisterLayout {
        &self.layout
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn amplitude(&self, values: &[u64]) -> Result<Complex64> {
        Ok(self.amplitudes[self.layout.index_of(values)?])
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    /// Largest absolute amplitude difference to `other` (same layout assumed).
    pub fn max_deviation(&self, other: &StateVector) -> f64 {
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// `H^{⊗w}` on the named register.
    pub fn hadamard(&mut self, register: &str) -> Result<()> {
        let reg = self.layout.register(register)?.clone();
        let scale = std::f64::consts::FRAC_1_SQRT_2;
        for bit in reg.shift..reg.shift + reg.width {
            let stride = 1usize << bit;
            for block in (0..self.amplitudes.len()).step_by(stride << 1) {
                for i in block..block + stride {
                    let a = self.amplitudes[i];
                    let b = self.amplitudes[i + stride];
                    self.amplitudes[i] = (a + b) * scale;
                    self.amplitudes[i + stride] = (a - b) * scale;
                }
            }
        }
        Ok(())
    }

    /// `|x⟩|y⟩ ↦ |x⟩|y ⊕ f(x)⟩` with `f` given as a table indexed by `x`.
    pub fn xor_oracle(&mut self, input: &str, output: &str, table: &[u32]) -> Result<()> {
        let (inp, out) = self.oracle_registers(input, output)?;
        check_table(table, &inp, &out)?;
        self.xor_with(&inp, &out, None, |x| table[x as usize] as u64);
        Ok(())
    }

    /// Like [`xor_oracle`](Self::xor_oracle) with `f` given as a closure.
    /// Outputs are truncated to the output register width.
    pub fn xor_oracle_fn(
        &mut self,
        input: &str,
        output: &str,
        f: impl Fn(u64) -> u64,
    ) -> Result<()> {
        let (inp, out) = self.oracle_registers(input, output)?;
        let mask = out.mask();
        self.xor_with(&inp, &out, None, |x| f(x) & mask);
        Ok(())
    }

    /// `|c⟩|x⟩|y⟩ ↦ |c⟩|x⟩|y ⊕ c·f(x)⟩`.
    pub fn controlled_xor_oracle(
        &mut self,
        control: &str,
        input: &str,
        output: &str,
        table: &[u32],
    ) -> Result<()> {
        let ctrl = self.layout.register(control)?.clone();
        if ctrl.width != 1 {
            return Err(Error::ControlWidth(control.to_string()));
        }
        if control == input || control == output {
            return Err(Error::RegisterAlias(control.to_string(), input.to_string()));
        }
        let (inp, out) = self.oracle_registers(input, output)?;
        check_table(table, &inp, &out)?;
        self.xor_with(&inp, &out, Some(ctrl.shift), |x| table[x as usize] as u64);
        Ok(())
    }

    fn oracle_registers(&self, input: &str, output: &str) -> Result<(Register, Register)> {
        if input == output {
            return Err(Error::RegisterAlias(input.to_string(), output.to_string()));
        }
        Ok((
            self.layout.register(input)?.clone(),
            self.layout.register(output)?.clone(),
        ))
    }

    fn xor_with(
        &mut self,
        input: &Register,
        output: &Register,
        control_shift: Option<usize>,
        f: impl Fn(u64) -> u64,
    ) {
        for index in 0..self.amplitudes.len() {
            if let Some(c) = control_shift {
                if (index >> c) & 1 == 0 {
                    continue;
                }
            }
            let fx = f(input.extract(index));
            if fx == 0 {
                continue;
            }
            let target = index ^ ((fx as usize) << output.shift);
            // each pair {index, target} is visited twice; swap it once
            if target > index {
                self.amplitudes.swap(index, target);
            }
        }
    }

    /// Multiplies the amplitude of every basis state whose `register` value
    /// satisfies `predicate` by −1.
    pub fn phase_oracle(&mut self, register: &str, predicate: impl Fn(u64) -> bool) -> Result<()> {
        let reg = self.layout.register(register)?.clone();
        if reg.width == self.layout.total_qubits() {
            for (index, amp) in self.amplitudes.iter_mut().enumerate() {
                if predicate(index as u64) {
                    *amp = -*amp;
                }
            }
            return Ok(());
        }
        for (index, amp) in self.amplitudes.iter_mut().enumerate() {
            if predicate(reg.extract(index)) {
                *amp = -*amp;
            }
        }
        Ok(())
    }

    /// Grover diffusion `2|s⟩⟨s| − 1` on `register`, where `|s⟩` is the
    /// uniform superposition; other registers act as spectators.
    pub fn diffusion(&mut self, register: &str) -> Result<()> {
        let reg = self.layout.register(register)?.clone();
        let size = 1usize << reg.width;
        let reg_bits = (size - 1) << reg.shift;
        for base in 0..self.amplitudes.len() {
            if base & reg_bits != 0 {
                continue;
            }
            let mut sum = Complex64::new(0.0, 0.0);
            for v in 0..size {
                sum += self.amplitudes[base | (v << reg.shift)];
            }
            let twice_mean = sum * (2.0 / size as f64);
            for v in 0..size {
                let i = base | (v << reg.shift);
                self.amplitudes[i] = twice_mean - self.amplitudes[i];
            }
        }
        Ok(())
    }

    /// Born probability that measuring `register` yields `value`.
    pub fn probability_of(&self, register: &str, value: u64) -> Result<f64> {
        let reg = self.layout.register(register)?;
        if value > reg.mask() {
            return Err(Error::ValueTooWide {
                register: register.to_string(),
                value,
                width: reg.width,
            });
        }
        Ok(self
            .amplitudes
            .iter()
            .enumerate()
            .filter(|(i, _)| reg.extract(*i) == value)
            .map(|(_, a)| a.norm_sqr())
            .sum())
    }

    /// Outcome distribution of `register`, indexed by value.
    pub fn register_distribution(&self, register: &str) -> Result<Vec<f64>> {
        let reg = self.layout.register(register)?;
        if reg.width == self.layout.total_qubits() {
            return Ok(self.amplitudes.iter().map(|a| a.norm_sqr()).collect());
        }
        let mut probs = vec![0.0; 1usize << reg.width];
        for (i, a) in self.amplitudes.iter().enumerate() {
            probs[reg.extract(i) as usize] += a.norm_sqr();
        }
        Ok(probs)
    }

    /// Projective measurement of `register`: samples an outcome with Born
    /// probabilities, collapses onto it and renormalizes.
    pub fn measure<R: Rng + ?Sized>(&mut self, register: &str, rng: &mut R) -> Result<u64> {
        let probs = self.register_distribution(register)?;
        let total: f64 = probs.iter().sum();
        let mut r = rng.random::<f64>() * total;
        let mut outcome = probs.len() - 1;
        for (v, p) in probs.iter().enumerate() {
            if r < *p {
                outcome = v;
                break;
            }
            r -= p;
        }
        // guard against landing on a zero-weight tail through rounding
        while probs[outcome] == 0.0 && outcome > 0 {
            outcome -= 1;
        }
        let p = probs[outcome];
        if p <= 0.0 {
            return Err(Error::DegenerateBranch);
        }
        let reg = self.layout.register(register)?.clone();
        let scale = 1.0 / p.sqrt();
        for (i, a) in self.amplitudes.iter_mut().enumerate() {
            if reg.extract(i) == outcome as u64 {
                *a *= scale;
            } else {
                *a = Complex64::new(0.0, 0.0);
            }
        }
        Ok(outcome as u64)
    }
}

fn check_table(table: &[u32], input: &Register, output: &Register) -> Result<()> {
    let expected = 1usize << input.width;
    if table.len() != expected {
        return Err(Error::TableSize {
            expected,
            got: table.len(),
        });
    }
    if let Some(&bad) = table.iter().find(|&&v| v as u64 > output.mask()) {
        return Err(Error::TableEntryTooWide {
            value: bad as u64,
            width: output.width,
        });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn layout(regs: &[(&str, usize)]) -> RegisterLayout {
        RegisterLayout::new(regs).unwrap()
    }

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn basis_state_embedding() {
        let s = StateVector::basis(layout(&[("X", 2)]), &[0]).unwrap();
        assert_eq!(s.amplitudes()[0], c(1.0));
        let s = StateVector::basis(layout(&[("X", 1), ("Y", 1)]), &[1, 0]).unwrap();
        assert_eq!(s.amplitudes()[0b10], c(1.0));
        assert!((s.norm_sqr() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn basis_rejects_wide_value() {
        let err = StateVector::basis(layout(&[("X", 2)]), &[0b101]).unwrap_err();
        assert!(matches!(err, Error::ValueTooWide { width: 2, .. }));
    }

    #[test]
    fn layout_validation() {
        assert!(matches!(
            RegisterLayout::new(&[("X", 1), ("X", 2)]),
            Err(Error::DuplicateRegister(_))
        ));
        assert!(matches!(
            RegisterLayout::new(&[("X", 0)]),
            Err(Error::ZeroWidthRegister(_))
        ));
        assert!(matches!(
            RegisterLayout::with_cap(&[("X", 20), ("Y", 9)], 28),
            Err(Error::QubitCap {
                requested: 29,
                cap: 28
            })
        ));
        let l = layout(&[("A", 3), ("B", 2), ("C", 1)]);
        let shifts: Vec<_> = l.registers().iter().map(|r| r.shift()).collect();
        assert_eq!(shifts, vec![3, 1, 0]);
    }

    #[test]
    fn hadamard_single_and_involution() {
        let mut s = StateVector::zero(layout(&[("X", 1)]));
        s.hadamard("X").unwrap();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        assert!((s.amplitudes()[0] - c(h)).norm() < 1e-15);
        assert!((s.amplitudes()[1] - c(h)).norm() < 1e-15);
        s.hadamard("X").unwrap();
        let orig = StateVector::zero(layout(&[("X", 1)]));
        assert!(s.max_deviation(&orig) < 1e-12);
    }

    #[test]
    fn hadamard_uniform_two_qubits() {
        let mut s = StateVector::zero(layout(&[("X", 2)]));
        s.hadamard("X").unwrap();
        for a in s.amplitudes() {
            assert!((a - c(0.5)).norm() < 1e-15);
        }
        assert!(matches!(s.hadamard("Z"), Err(Error::UnknownRegister(_))));
    }

    #[test]
    fn uniform_matches_hadamard_on_zero() {
        let l = layout(&[("X", 3), ("Y", 2)]);
        for reg in ["X", "Y"] {
            let mut h = StateVector::zero(l.clone());
            h.hadamard(reg).unwrap();
            let u = StateVector::uniform(l.clone(), reg).unwrap();
            assert!(h.max_deviation(&u) < 1e-15);
        }
    }

    #[test]
    fn xor_oracle_zero_and_involution() {
        let mut s = StateVector::zero(layout(&[("X", 2), ("Y", 2)]));
        s.hadamard("X").unwrap();
        let before = s.clone();
        s.xor_oracle("X", "Y", &[0, 0, 0, 0]).unwrap();
        assert!(s.max_deviation(&before) < 1e-15);
        let f = [3, 1, 2, 0];
        s.xor_oracle("X", "Y", &f).unwrap();
        s.xor_oracle("X", "Y", &f).unwrap();
        assert!(s.max_deviation(&before) < 1e-12);
    }

    #[test]
    fn xor_oracle_identity_on_uniform_input() {
        // Σ_x |x⟩|00⟩ / 2  ↦  Σ_x |x⟩|x⟩ / 2, enumerated by hand over 16 basis states
        let mut s = StateVector::zero(layout(&[("X", 2), ("Y", 2)]));
        s.hadamard("X").unwrap();
        s.xor_oracle("X", "Y", &[0, 1, 2, 3]).unwrap();
        for x in 0..4u64 {
            for y in 0..4u64 {
                let expect = if x == y { 0.5 } else { 0.0 };
                assert!((s.amplitude(&[x, y]).unwrap() - c(expect)).norm() < 1e-15);
            }
        }
    }

    #[test]
    fn xor_oracle_table_checks() {
        let mut s = StateVector::zero(layout(&[("X", 2), ("Y", 1)]));
        assert!(matches!(
            s.xor_oracle("X", "Y", &[0, 1]),
            Err(Error::TableSize {
                expected: 4,
                got: 2
            })
        ));
        assert!(matches!(
            s.xor_oracle("X", "Y", &[0, 1, 2, 0]),
            Err(Error::TableEntryTooWide { .. })
        ));
        assert!(matches!(
            s.xor_oracle("X", "X", &[0, 1, 0, 1]),
            Err(Error::RegisterAlias(..))
        ));
    }

    #[test]
    fn controlled_oracle_branches() {
        let f = [1u32, 3, 0, 2];
        let l = layout(&[("C", 1), ("X", 2), ("Y", 2)]);
        // control off
        let mut s = StateVector::basis(l.clone(), &[0, 2, 1]).unwrap();
        let before = s.clone();
        s.controlled_xor_oracle("C", "X", "Y", &f).unwrap();
        assert!(s.max_deviation(&before) < 1e-15);
        // control on equals the plain oracle
        let mut on = StateVector::basis(l.clone(), &[1, 2, 1]).unwrap();
        let mut plain = on.clone();
        on.controlled_xor_oracle("C", "X", "Y", &f).unwrap();
        plain.xor_oracle("X", "Y", &f).unwrap();
        assert!(on.max_deviation(&plain) < 1e-15);

        let bad = layout(&[("C", 2), ("X", 1), ("Y", 1)]);
        let mut s = StateVector::zero(bad);
        assert!(matches!(
            s.controlled_xor_oracle("C", "X", "Y", &[0, 1]),
            Err(Error::ControlWidth(_))
        ));
    }

    #[test]
    fn controlled_oracle_split_and_recombine() {
        // control in |+⟩: result is (|0⟩ψ + |1⟩ O ψ)/√2, checked branch by branch
        let f = [2u32, 0, 3, 1];
        let l = layout(&[("C", 1), ("X", 2), ("Y", 2)]);
        let mut s = StateVector::zero(l.clone());
        s.hadamard("C").unwrap();
        s.hadamard("X").unwrap();
        s.controlled_xor_oracle("C", "X", "Y", &f).unwrap();

        let sub = layout(&[("X", 2), ("Y", 2)]);
        let mut off = StateVector::zero(sub.clone());
        off.hadamard("X").unwrap();
        let mut on = off.clone();
        on.xor_oracle("X", "Y", &f).unwrap();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        for i in 0..16 {
            assert!((s.amplitudes()[i] - off.amplitudes()[i] * h).norm() < 1e-12);
            assert!((s.amplitudes()[16 + i] - on.amplitudes()[i] * h).norm() < 1e-12);
        }
    }

    #[test]
    fn phase_oracle_cases() {
        let mut s = StateVector::zero(layout(&[("X", 2)]));
        s.hadamard("X").unwrap();
        let uniform = s.clone();
        s.phase_oracle("X", |_| false).unwrap();
        assert!(s.max_deviation(&uniform) < 1e-15);
        s.phase_oracle("X", |x| x == 0b11).unwrap();
        let want = [0.5, 0.5, 0.5, -0.5];
        for (a, w) in s.amplitudes().iter().zip(want) {
            assert!((a - c(w)).norm() < 1e-15);
        }
        s.phase_oracle("X", |x| x == 0b11).unwrap();
        assert!(s.max_deviation(&uniform) < 1e-15);
    }

    #[test]
    fn phase_equals_xor_with_minus_ancilla() {
        // U_f |x⟩|−⟩ = (−1)^{f(x)} |x⟩|−⟩ for every predicate on 1 and 2 qubits
        for width in 1..=2usize {
            let size = 1u64 << width;
            for mask in 0..(1u32 << size) {
                let pred = |x: u64| (mask >> x) & 1 == 1;
                let table: Vec<u32> = (0..size).map(|x| pred(x) as u32).collect();
                let mut start =
                    StateVector::basis(layout(&[("X", width), ("A", 1)]), &[0, 1]).unwrap();
                start.hadamard("X").unwrap();
                start.hadamard("A").unwrap();

                let mut via_xor = start.clone();
                via_xor.xor_oracle("X", "A", &table).unwrap();
                let mut via_phase = start;
                via_phase.phase_oracle("X", pred).unwrap();
                assert!(
                    via_xor.max_deviation(&via_phase) < 1e-12,
                    "width {width} mask {mask:b}"
                );
            }
        }
    }

    #[test]
    fn diffusion_is_involution_and_fixes_uniform() {
        let mut s = StateVector::zero(layout(&[("X", 3), ("Y", 1)]));
        s.hadamard("X").unwrap();
        let uniform = s.clone();
        s.diffusion("X").unwrap();
        assert!(s.max_deviation(&uniform) < 1e-12);
        s.phase_oracle("X", |x| x == 5).unwrap();
        let marked = s.clone();
        s.diffusion("X").unwrap();
        s.diffusion("X").unwrap();
        assert!(s.max_deviation(&marked) < 1e-12);
    }

    #[test]
    fn probabilities() {
        let s = StateVector::basis(layout(&[("X", 3)]), &[5]).unwrap();
        assert_eq!(s.probability_of("X", 5).unwrap(), 1.0);
        assert_eq!(s.probability_of("X", 4).unwrap(), 0.0);
        let mut u = StateVector::zero(layout(&[("X", 3)]));
        u.hadamard("X").unwrap();
        for v in 0..8 {
            assert!((u.probability_of("X", v).unwrap() - 0.125).abs() < 1e-12);
        }
        assert!(matches!(
            u.probability_of("X", 8),
            Err(Error::ValueTooWide { .. })
        ));
    }

    #[test]
    fn measure_basis_and_born_rule() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mut s = StateVector::basis(layout(&[("X", 2), ("Y", 2)]), &[2, 1]).unwrap();
        assert_eq!(s.measure("X", &mut rng).unwrap(), 2);
        assert_eq!(s.measure("Y", &mut rng).unwrap(), 1);

        let mut ones = 0;
        let trials = 100_000;
        for _ in 0..trials {
            let mut u = StateVector::zero(layout(&[("X", 1)]));
            u.hadamard("X").unwrap();
            ones += u.measure("X", &mut rng).unwrap();
        }
        let freq = ones as f64 / trials as f64;
        assert!((freq - 0.5).abs() < 0.01, "freq {freq}");
    }

    #[test]
    fn measure_collapses_and_renormalizes() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let mut s = StateVector::zero(layout(&[("X", 2), ("Y", 2)]));
        s.hadamard("X").unwrap();
        s.xor_oracle("X", "Y", &[0, 1, 2, 3]).unwrap();
        let x = s.measure("X", &mut rng).unwrap();
        assert!((s.norm_sqr() - 1.0).abs() < NORM_TOLERANCE);
        assert_eq!(s.probability_of("Y", x).unwrap(), 1.0);
    }
}
