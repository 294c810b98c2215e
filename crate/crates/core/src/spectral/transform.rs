//! Orthonormal 2-D transforms that diagonalize the discrete Laplacians.
//!
//! Periodic grids use the unitary 2-D DFT (`1/n` on both directions), Neumann
//! grids use the orthonormal 2-D DCT-II whose inverse is the DCT-III. Both are
//! separable and applied as row passes around a square transpose.

use std::f64::consts::PI;
use std::sync::Arc;

use rustfft::num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

pub(crate) fn transpose_in_place<T>(data: &mut [T], n: usize) {
    for i in 0..n {
        for j in (i + 1)..n {
            data.swap(i * n + j, j * n + i);
        }
    }
}

/// Unitary 2-D DFT on an `n × n` complex array.
#[derive(Clone)]
pub(crate) struct Fft2 {
    n: usize,
    fwd: Arc<dyn Fft<f64>>,
    inv: Arc<dyn Fft<f64>>,
}

impl Fft2 {
    pub(crate) fn new(n: usize) -> Self {
        let mut planner = FftPlanner::new();
        Self {
            n,
            fwd: planner.plan_fft_forward(n),
            inv: planner.plan_fft_inverse(n),
        }
    }

    fn passes(&self, plan: &Arc<dyn Fft<f64>>, buf: &mut [Complex64]) {
        let mut scratch = vec![Complex64::default(); plan.get_inplace_scratch_len()];
        plan.process_with_scratch(buf, &mut scratch);
        transpose_in_place(buf, self.n);
        plan.process_with_scratch(buf, &mut scratch);
        transpose_in_place(buf, self.n);
        let s = 1.0 / self.n as f64;
        buf.iter_mut().for_each(|c| *c *= s);
    }

    pub(crate) fn forward(&self, buf: &mut [Complex64]) {
        self.passes(&self.fwd, buf);
    }

    pub(crate) fn inverse(&self, buf: &mut [Complex64]) {
        self.passes(&self.inv, buf);
    }
}

/// Orthonormal 1-D DCT-II of length `n` (and its inverse) computed with one
/// complex FFT of length `n` via the even/odd reordering.
#[derive(Clone)]
struct Dct1d {
    n: usize,
    fwd: Arc<dyn Fft<f64>>,
    inv: Arc<dyn Fft<f64>>,
    // e^{-iπk/(2n)}
    twiddle: Vec<Complex64>,
}

impl Dct1d {
    fn new(n: usize) -> Self {
        let mut planner = FftPlanner::new();
        let twiddle = (0..n)
            .map(|k| Complex64::from_polar(1.0, -PI * k as f64 / (2.0 * n as f64)))
            .collect();
        Self {
            n,
            fwd: planner.plan_fft_forward(n),
            inv: planner.plan_fft_inverse(n),
            twiddle,
        }
    }

    fn scratch_len(&self) -> usize {
        self.fwd
            .get_inplace_scratch_len()
            .max(self.inv.get_inplace_scratch_len())
    }

    fn forward(&self, x: &mut [f64], work: &mut [Complex64], scratch: &mut [Complex64]) {
        let n = self.n;
        for k in 0..n.div_ceil(2) {
            work[k] = Complex64::new(x[2 * k], 0.0);
        }
        for k in 0..n / 2 {
            work[n - 1 - k] = Complex64::new(x[2 * k + 1], 0.0);
        }
        self.fwd.process_with_scratch(work, scratch);
        let s0 = (1.0 / n as f64).sqrt();
        let s = (2.0 / n as f64).sqrt();
        for k in 0..n {
            let c = (self.twiddle[k] * work[k]).re;
            x[k] = if k == 0 { c * s0 } else { c * s };
        }
    }

    fn inverse(&self, y: &mut [f64], work: &mut [Complex64], scratch: &mut [Complex64]) {
        let n = self.n;
        let nf = n as f64;
        let unscaled = |k: usize| -> f64 {
            if k == 0 {
                y[0] * nf.sqrt()
            } else if k < n {
                y[k] * (nf / 2.0).sqrt()
            } else {
                0.0
            }
        };
        for (k, w) in work.iter_mut().enumerate().take(n) {
            let z = Complex64::new(unscaled(k), -unscaled(n - k));
            *w = self.twiddle[k].conj() * z;
        }
        self.inv.process_with_scratch(work, scratch);
        for k in 0..n.div_ceil(2) {
            y[2 * k] = work[k].re / nf;
        }
        for k in 0..n / 2 {
            y[2 * k + 1] = work[n - 1 - k].re / nf;
        }
    }
}

/// Orthonormal 2-D DCT-II / DCT-III on an `n × n` real array.
#[derive(Clone)]
pub(crate) struct Dct2 {
    n: usize,
    line: Dct1d,
}

impl Dct2 {
    pub(crate) fn new(n: usize) -> Self {
        Self {
            n,
            line: Dct1d::new(n),
        }
    }

    fn rows(&self, buf: &mut [f64], inverse: bool) {
        let mut work = vec![Complex64::default(); self.n];
        let mut scratch = vec![Complex64::default(); self.line.scratch_len()];
        for row in buf.chunks_exact_mut(self.n) {
            if inverse {
                self.line.inverse(row, &mut work, &mut scratch);
            } else {
                self.line.forward(row, &mut work, &mut scratch);
            }
        }
    }

    pub(crate) fn forward(&self, buf: &mut [f64]) {
        self.rows(buf, false);
        transpose_in_place(buf, self.n);
        self.rows(buf, false);
        transpose_in_place(buf, self.n);
    }

    pub(crate) fn inverse(&self, buf: &mut [f64]) {
        self.rows(buf, true);
        transpose_in_place(buf, self.n);
        self.rows(buf, true);
        transpose_in_place(buf, self.n);
    }
}
