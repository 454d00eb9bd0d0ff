//! Symbolic closed forms: gamma expressions, their simplifier, the product
//! theorems that produce them and a catalog of verified identities.

mod algebraic;
mod catalog;
mod expr;
mod simplify;
mod theorems;

pub use algebraic::AlgebraicLiteral;
pub use catalog::{
    identity_catalog, paperfold_b_spec, paperfold_b_value, verify_record, ClosedForm,
    IdentityRecord, Lhs, RecordCheck,
};
pub use expr::{eval_expr, GammaExpr};
pub use simplify::simplify;
pub use theorems::{
    nijenhuis, sandor_toth, sporadic_gamma_identities, sporadic_product_values, t_chain,
    t_chain_spec, t_k, tangent_product, tangent_spec, tangent_triple, theorem_pair,
    theorem_pair_spec, theorem_simple, theorem_simple_alt, theorem_simple_spec, u_shift,
    u_shift_spec, ww_for_spec, ww_product, GammaIdentity, Nijenhuis, TangentIdentity,
};
