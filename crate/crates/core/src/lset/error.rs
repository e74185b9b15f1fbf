use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LsetError {
    #[error("undecidable beyond bound: {n} exceeds the enumeration bound {bound} of `{set}`")]
    Undecidable { set: String, n: u128, bound: u128 },

    #[error("g({x}) exceeds a_max = {a_max}")]
    GExceedsCap { x: u128, a_max: u128 },

    #[error("no x <= {x_bound} satisfies {what}")]
    NoXBelowBound { what: String, x_bound: u128 },

    #[error("no gap of {len} consecutive non-members starting in [{from}, {search_bound}]")]
    NoGapBelowBound { len: u128, from: u128, search_bound: u128 },

    #[error("no {k}-lonely member in [{min_p}, {search_bound}]")]
    NoLonelyBelowBound { k: u128, min_p: u128, search_bound: u128 },

    #[error("arithmetic overflow while computing {0}")]
    Overflow(&'static str),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("bad set spec `{spec}`: {reason}")]
    Spec { spec: String, reason: String },

    #[error("{path}:{line}: {reason}")]
    FileParse { path: String, line: usize, reason: String },

    #[error("cannot read `{path}`: {reason}")]
    Io { path: String, reason: String },
}

impl LsetError {
    /// True for the "search ran out of room" family, as opposed to malformed input.
    pub fn is_bound_exhausted(&self) -> bool {
        matches!(
            self,
            LsetError::Undecidable { .. }
                | LsetError::GExceedsCap { .. }
                | LsetError::NoXBelowBound { .. }
                | LsetError::NoGapBelowBound { .. }
                | LsetError::NoLonelyBelowBound { .. }
                | LsetError::Overflow(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, LsetError>;
