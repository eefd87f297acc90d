use thiserror::Error;

/// Errors raised anywhere in the lab.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("unknown register `{0}`")]
    UnknownRegister(String),
    #[error("duplicate register name `{0}`")]
    DuplicateRegister(String),
    #[error("register `{0}` must be at least one qubit wide")]
    ZeroWidthRegister(String),
    #[error("layout needs {requested} qubits, simulator cap is {cap}")]
    QubitCap { requested: usize, cap: usize },
    #[error("value {value:#x} does not fit in {width}-bit register `{register}`")]
    ValueTooWide {
        register: String,
        value: u64,
        width: usize,
    },
    #[error("expected {expected} values for register `{register}`, layout has {got}")]
    WrongValueCount {
        register: String,
        expected: usize,
        got: usize,
    },
    #[error("oracle table has {got} entries, register widths require {expected}")]
    TableSize { expected: usize, got: usize },
    #[error("oracle output {value:#x} does not fit in {width} bits")]
    TableEntryTooWide { value: u64, width: usize },
    #[error("control register `{0}` must be exactly one qubit wide")]
    ControlWidth(String),
    #[error("registers `{0}` and `{1}` must be distinct")]
    RegisterAlias(String, String),
    #[error("measured branch has zero probability")]
    DegenerateBranch,
    #[error("operator is not a projector (deviation {0:.3e})")]
    NotProjector(f64),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("state is not normalized (norm² = {0})")]
    NotNormalized(f64),
    #[error("epsilon {given} is below ‖(1-P)ψ‖² = {actual} for projector {index}")]
    EpsilonTooSmall {
        index: usize,
        given: f64,
        actual: f64,
    },

    #[error("bit width {0} is out of range (1..=28)")]
    WidthOutOfRange(usize),
    #[error("width mismatch: {0} vs {1}")]
    WidthMismatch(usize, usize),
    #[error("table is not a bijection")]
    NotBijective,
    #[error("transcript repeats input {0:#x}")]
    DuplicateTranscriptInput(u64),
    #[error("transcript repeats output {0:#x}")]
    DuplicateTranscriptOutput(u64),
    #[error("reprogram set lists input {0:#x} more than once")]
    DuplicateReprogramInput(u64),
    #[error("malformed hex dump: {0}")]
    HexDump(String),

    #[error("{kind} query budget of {budget} exceeded")]
    BudgetExceeded { kind: &'static str, budget: usize },
    #[error("redundant classical query {0:#x}")]
    RedundantQuery(u64),
    #[error("inverse queries are not available for this oracle")]
    InverseUnavailable,
    #[error("quantum access to the keyed oracle is only granted in Q2 diagnostic mode")]
    KeyedQuantumDenied,
    #[error("oracle is not available in the current phase: {0}")]
    WrongPhase(&'static str),
    #[error("phase predicate evaluated the oracle {used} times, declared {declared}")]
    EvaluationOverrun { used: usize, declared: usize },
    #[error("hybrid index {j} out of range for q_E = {q_e}")]
    HybridIndex { j: usize, q_e: usize },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("predicate marks no values")]
    NoTargets,
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
