//! Sign conventions the defining formulas leave open, pinned by exhaustive
//! low-degree computation. Each constant has a test that re-derives it.

/// `b ∘ β = BETA_CHAIN_SIGN · β ∘ b'`.
pub const BETA_CHAIN_SIGN: i64 = 1;

/// Sign rule of the convolution product and the bimodule actions.
pub const PRODUCT_SIGN: crate::cochains::ProductSign = crate::cochains::ProductSign::Koszul;

/// `∂(fg) = ∂f · g + PARTIAL_LEIBNIZ_SIGN · f · ∂g`.
pub const PARTIAL_LEIBNIZ_SIGN: i64 = 1;
