//! Deducibility in the full Lambek calculus with weakening and its fragments,
//! decided by forward saturation over a well-quasi-order, together with lossy
//! channel system reachability and the reduction from the latter to the former.

pub mod calculus;
pub mod encoding;
pub mod error;
pub mod gen;
pub mod lcs;
pub mod saturation;
pub mod syntax;
pub mod wqo;

pub use calculus::{
    builtin_calculus, check_deduction, is_regular, match_instance, normalize_to_standard, Calculus,
    CheckReport, Derivation, Justification, RuleSchema, Substitution,
};
pub use encoding::{reduce, EncodedInstance};
pub use error::{Error, Result};
pub use lcs::{ChannelSystem, Configuration, Instruction, Op};
pub use saturation::{decide, saturate, Config, Engine, SaturationState, Verdict};
pub use syntax::{BinOp, Connective, Constant, Formula, Fragment, Sequent, Theory};
