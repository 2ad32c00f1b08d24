//! Uniform-grid evaluation and analysis of trigonometric polynomials.
//!
//! Evaluating `d0 + sum d_k cos(k x + phi_k)` at the `N` points `x_j = 2 pi j / N`
//! is an (unnormalized) inverse DFT of the one-sided complex spectrum
//! `a_0 = d0, a_k = d_k e^{i phi_k}`, so both directions run in `O(N log N)`
//! through rustfft. All norm estimation and coefficient extraction in this
//! crate funnels through these two helpers; the direct summation in
//! `TrigPolynomial::evaluate` stays an independent code path that the tests
//! use to cross-check the transforms.

use std::cell::RefCell;

use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::poly::TrigPolynomial;

thread_local! {
    static PLANNER: RefCell<FftPlanner<f64>> = RefCell::new(FftPlanner::new());
}

/// Values of `t` at the uniform grid `x_j = 2 pi j / n_points`, `j = 0..n_points`.
///
/// `n_points` must exceed the degree, otherwise high frequencies would alias.
pub(crate) fn eval_uniform(t: &TrigPolynomial, n_points: usize) -> Vec<f64> {
    assert!(
        n_points > t.degree() as usize,
        "grid of {} points cannot carry degree {}",
        n_points,
        t.degree()
    );
    let mut buf = vec![Complex64::new(0.0, 0.0); n_points];
    buf[0] = Complex64::new(t.d0(), 0.0);
    for term in t.terms() {
        buf[term.k as usize] = Complex64::from_polar(term.d, term.phi);
    }
    PLANNER.with(|p| {
        let fft = p.borrow_mut().plan_fft_inverse(n_points);
        fft.process(&mut buf);
    });
    buf.into_iter().map(|z| z.re).collect()
}

/// Raw forward DFT `F_k = sum_j samples[j] e^{-2 pi i j k / N}` (unnormalized).
pub(crate) fn forward_dft(samples: &[f64]) -> Vec<Complex64> {
    let mut buf: Vec<Complex64> =
        samples.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    PLANNER.with(|p| {
        let fft = p.borrow_mut().plan_fft_forward(buf.len());
        fft.process(&mut buf);
    });
    buf
}

/// Largest absolute value, 0 for an empty slice.
pub(crate) fn sup(values: &[f64]) -> f64 {
    values.iter().map(|v| v.abs()).fold(0.0, f64::max)
}
