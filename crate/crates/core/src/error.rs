use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("{what} must be at least {min}, got {got}")]
    TooSmall { what: &'static str, min: u64, got: u64 },

    #[error("Stirling index k = {k} is outside 1..={n}")]
    StirlingIndex { n: usize, k: usize },

    #[error("{what} = {value} is outside the valid domain {domain}")]
    Domain {
        what: &'static str,
        value: String,
        domain: &'static str,
    },

    #[error(
        "precision 1e-{digits} not reached: error estimate {estimate:.3e} \
         after {evaluations} evaluations"
    )]
    PrecisionNotReached {
        digits: u32,
        estimate: f64,
        evaluations: usize,
    },

    #[error("circle of radius {radius:e} passes within {clearance:e} of the pole at z = -1")]
    PoleTooClose { radius: f64, clearance: f64 },
}

impl Error {
    pub(crate) fn domain(what: &'static str, value: impl ToString, domain: &'static str) -> Self {
        Error::Domain {
            what,
            value: value.to_string(),
            domain,
        }
    }
}
