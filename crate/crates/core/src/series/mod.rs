//! Truncated power series and the probability tables of `ν_p` built from
//! them.

mod lemma1;
mod pmf;
mod truncated;

pub use lemma1::{validate_lemma1, Lemma1Failure, Lemma1Report};
pub use pmf::{
    auto_order, chebyshev_by_reciprocal, expand_pgf, expand_series, fmt17, tail_bounds, Pmf,
    MAX_TABLE_ORDER, NEGATIVE_FLOOR, TAIL_LIMIT,
};
pub use truncated::TruncatedSeries;
