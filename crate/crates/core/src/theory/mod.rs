//! Equations between terms, decided by comparing denotations up to a
//! scalar; sharing commutation; linear β-reduction.

mod beta;
mod check;
mod rules;
mod sharing;

pub use beta::{beta_step, normalize, Normalized};
pub use check::{
    body_pool, check_rule_instance, check_rule_instance_with_budget, run_suite, standard_pool, PoolInstance,
    RuleVerdict, Status, SUITE_WIRE_BUDGET,
};
pub use rules::{rule, rules, Bindings, EquationRule, SideCondition};
pub use sharing::commutes_with_sharing;
