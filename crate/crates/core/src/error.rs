use alloc::string::String;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("dimension mismatch in {op}: {detail}")]
    DimensionMismatch { op: &'static str, detail: String },

    #[error("invalid argument: {0}")]
    InvalidArgument(&'static str),

    #[error("non-finite entry in {0}")]
    NonFinite(&'static str),

    #[error("shifted state matrix is numerically singular at omega = {omega}")]
    SingularAtFrequency { omega: f64 },

    #[error("Lyapunov equation is ill-posed (eigenvalue pair summing to zero)")]
    IllPosedLyapunov,

    #[error("state matrix has eigenvalues on the imaginary axis")]
    ImaginaryAxisPoles,

    #[error("H2 metric undefined for nonzero feedthrough")]
    NonzeroFeedthrough,

    #[error("rank {rank} outside 1..={max}")]
    RankOutOfRange { rank: usize, max: usize },

    #[error("sample at omega = 0 has a nonzero imaginary part")]
    NonRealSampleAtZero,

    #[error("minimal realization kept imaginary-axis poles of the error system")]
    ResidualImaginaryPoles,

    #[error("need {needed} non-zero eigenvalues, found {found}")]
    InsufficientSpectrum { needed: usize, found: usize },

    #[error("leading weight block is singular (condition number {condition:e})")]
    SingularW0 { condition: f64 },

    #[error("support point at omega = {omega} already exists")]
    DuplicateSupportPoint { omega: f64 },

    #[error("truncated singular values are degenerate")]
    DegenerateFactors,

    #[error("support point near omega = {omega} is already at full rank")]
    Saturated { omega: f64 },

    #[error("input system is not asymptotically stable")]
    UnstableInput,

    #[error("{0} did not converge")]
    NotConverged(&'static str),
}
