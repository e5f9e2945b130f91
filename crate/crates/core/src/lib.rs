pub mod budget;
pub mod error;
pub mod field;
pub mod fourier_motzkin;
pub mod fullrank;
pub mod interval;
pub mod linalg;
pub mod model;
pub mod rankone;
pub mod rankrange;
pub mod rational;
pub mod signs;
pub mod subsetmat;

pub use budget::Budgets;
pub use error::{Error, Result};
pub use field::FieldDescriptor;
pub use fullrank::{
    decide_full_rank, full_rank_rectangular, null_pair_search, rank_deficient_rational_witness,
    rohn_square_full_rank, verify_full_rank_refutations, FullRankDecision, NullPair, NullSearch,
    OrthantRefutation, RohnOutcome,
};
pub use interval::Interval;
pub use linalg::{determinant, exact_rank, Matrix, RationalMatrix};
pub use model::{IntervalMatrix, Normalization, Reduction, RowOp, SignBranch};
pub use rational::{format_rational, parse_rational, Rational};
pub use rankone::{
    rankone_any, rankone_criterion_bruteforce, rankone_feasibility_witness, BranchReason,
    BranchRefutation, CriterionViolation, RankOneDecision, RankOneRefutation, RankOneWitness,
    verify_rankone_refutation,
};
pub use rankrange::{rank_range_report, RankRangeReport};
pub use signs::SignVector;
pub use subsetmat::{
    brute_force_max_rank_oracle, complementary_matrix, detc, interval_as_subset, max_rank,
    max_rank_witness, strongly_singular, MaxRankCertificate, PgDiagonal, SubsetEntry, SubsetMatrix,
};
