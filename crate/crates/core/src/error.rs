use crate::params::Hypothesis;

/// Errors raised by the solver, the diagnostics and the scenario runner.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("parameters violate hypotheses: {}", list_hypotheses(.0))]
    Domain(Vec<Hypothesis>),

    #[error("no admissible delta: {0}")]
    Infeasible(String),

    #[error("free parameter {name} = {value} is outside (0, {upper})")]
    FreeParameter {
        name: &'static str,
        value: f64,
        upper: f64,
    },

    #[error("invalid mesh: {0}")]
    Mesh(String),

    #[error("midpoint iteration matrix is singular for dt = {dt}")]
    SingularMatrix { dt: f64 },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    Dimension { expected: usize, found: usize },

    #[error("oracle integrator is limited to m <= 8 unknowns, got m = {0}")]
    OracleTooLarge(usize),

    #[error("invalid time grid: {0}")]
    TimeGrid(String),

    #[error("need at least 3 records, got {0}")]
    TooFewSamples(usize),

    #[error("decay fit window retains only {0} usable samples (need 10)")]
    InsufficientData(usize),

    #[error("missing derivative data: {0}")]
    Order(String),

    #[error("unknown generator `{0}`")]
    UnknownForm(String),

    #[error("config line {line}: {message}")]
    Config { line: usize, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

fn list_hypotheses(hs: &[Hypothesis]) -> String {
    hs.iter()
        .map(|h| h.to_string())
        .collect::<Vec<_>>()
        .join("; ")
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
