//! Shared fixtures for the kernel benchmarks.

use algcochain::bar::{single_letter_bar_words, BarChain};
use algcochain::ncforms::{single_letter_basis, Form};
use algcochain::verify::alphabet;

/// Sum of all single-letter basis forms of degree `k` over `n` letters.
pub fn form_fixture(n: usize, k: usize) -> Form {
    let mut f = Form::zero();
    for w in single_letter_basis(&alphabet(n), k) {
        f = f.add(&Form::basis(w));
    }
    f
}

/// Sum of all single-letter bar words of length `k` over `n` letters.
pub fn bar_fixture(n: usize, k: usize) -> BarChain {
    let mut c = BarChain::zero();
    for w in single_letter_bar_words(&alphabet(n), k) {
        c = c.add(&BarChain::basis(w));
    }
    c
}
