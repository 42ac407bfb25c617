//! The rules of FL_w, each tagged with the connective it introduces.

use super::schema::{parse_rule_at, RuleSchema};
use crate::syntax::{BinOp, Connective, Constant};

const RULES: &[(&str, Option<Connective>)] = &[
    ("rule id: => p |- p", None),
    ("rule Lbot: => G1, bot, G2 |- P?", Some(Connective::Const(Constant::Bot))),
    ("rule Rtop: => G1 |- top", Some(Connective::Const(Constant::Top))),
    ("rule L0: => 0 |-", Some(Connective::Const(Constant::Zero))),
    ("rule R1: => |- 1", Some(Connective::Const(Constant::One))),
    ("rule wl: G1, G2 |- P? => G1, A, G2 |- P?", None),
    ("rule wr: G1 |- => G1 |- A", None),
    ("rule cut: G3 |- A ; G1, A, G2 |- P? => G1, G3, G2 |- P?", None),
    ("rule R0: G1 |- => G1 |- 0", Some(Connective::Const(Constant::Zero))),
    ("rule L1: G1, G2 |- P? => G1, 1, G2 |- P?", Some(Connective::Const(Constant::One))),
    ("rule Lfus: G1, A, B, G2 |- P? => G1, A * B, G2 |- P?", Some(Connective::Bin(BinOp::Fusion))),
    ("rule Rfus: G1 |- A ; G2 |- B => G1, G2 |- A * B", Some(Connective::Bin(BinOp::Fusion))),
    (
        "rule Lor: G1, A, G2 |- P? ; G1, B, G2 |- P? => G1, A \\/ B, G2 |- P?",
        Some(Connective::Bin(BinOp::Join)),
    ),
    ("rule Ror: G1 |- A => G1 |- A \\/ B", Some(Connective::Bin(BinOp::Join))),
    ("rule Ror: G1 |- B => G1 |- A \\/ B", Some(Connective::Bin(BinOp::Join))),
    ("rule Land: G1, A, G2 |- P? => G1, A /\\ B, G2 |- P?", Some(Connective::Bin(BinOp::Meet))),
    ("rule Land: G1, B, G2 |- P? => G1, A /\\ B, G2 |- P?", Some(Connective::Bin(BinOp::Meet))),
    ("rule Rand: G1 |- A ; G1 |- B => G1 |- A /\\ B", Some(Connective::Bin(BinOp::Meet))),
    (
        "rule Lover: G1 |- A ; G2, B, G3 |- P? => G2, B / A, G1, G3 |- P?",
        Some(Connective::Bin(BinOp::Over)),
    ),
    ("rule Rover: G1, A |- B => G1 |- B / A", Some(Connective::Bin(BinOp::Over))),
    (
        "rule Lunder: G1 |- A ; G2, B, G3 |- P? => G2, G1, A \\ B, G3 |- P?",
        Some(Connective::Bin(BinOp::Under)),
    ),
    ("rule Runder: A, G1 |- B => G1 |- A \\ B", Some(Connective::Bin(BinOp::Under))),
];

/// Every schema of the full calculus; the two-variant rules appear twice under one name.
pub fn all_rules() -> Vec<(RuleSchema, Option<Connective>)> {
    RULES
        .iter()
        .map(|(text, c)| (parse_rule_at(text, 0).expect("builtin rule text is well formed"), *c))
        .collect()
}

#[cfg(test)]
pub(crate) fn builtin_rule(name: &str) -> RuleSchema {
    all_rules().into_iter().map(|(r, _)| r).find(|r| r.name == name).unwrap()
}
