//! Nonlocal quadratic-potential convolution
//! `(K u)[i,j] = Σ_{k,l} h⁴/2 · ((i-k)² + (j-l)²) · u[k,l]`,
//! evaluated as a Toeplitz-block-Toeplitz product by zero padding to a
//! `2n × 2n` circulant and using the 2-D FFT.

use rustfft::num_complex::Complex64;

use super::transform::Fft2;
use crate::error::Result;
use crate::grid::{Field, GridSpec};

#[derive(Clone)]
pub struct QuadraticKernel {
    spec: GridSpec,
    m: usize,
    fft: Fft2,
    // unitary-FFT spectrum of the embedded kernel, pre-multiplied by m so a
    // pointwise product followed by the unitary inverse is the circular convolution
    spectrum: Vec<Complex64>,
}

impl std::fmt::Debug for QuadraticKernel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("QuadraticKernel")
            .field("spec", &self.spec)
            .field("padded", &self.m)
            .finish()
    }
}

impl QuadraticKernel {
    pub fn new(spec: GridSpec) -> Self {
        let n = spec.n_x();
        let m = 2 * n;
        let h = spec.h_x();
        let c = h.powi(4) / 2.0;
        let wrap = |d: usize| -> f64 {
            // offset represented by circular index d
            let s = if d < n { d as f64 } else { d as f64 - m as f64 };
            s * s
        };
        let mut buf = vec![Complex64::default(); m * m];
        for p in 0..m {
            if p >= n && p <= m - n {
                continue;
            }
            for q in 0..m {
                if q >= n && q <= m - n {
                    continue;
                }
                buf[p * m + q] = Complex64::new(c * (wrap(p) + wrap(q)), 0.0);
            }
        }
        let fft = Fft2::new(m);
        fft.forward(&mut buf);
        let scale = m as f64;
        buf.iter_mut().for_each(|z| *z *= scale);
        Self {
            spec,
            m,
            fft,
            spectrum: buf,
        }
    }

    pub fn spec(&self) -> &GridSpec {
        &self.spec
    }

    pub fn apply(&self, v: &Field) -> Result<Field> {
        self.spec.ensure_same(v.spec())?;
        let (n, m) = (self.spec.n_x(), self.m);
        let mut buf = vec![Complex64::default(); m * m];
        for (i, row) in v.as_slice().chunks_exact(n).enumerate() {
            for (j, &x) in row.iter().enumerate() {
                buf[i * m + j] = Complex64::new(x, 0.0);
            }
        }
        self.fft.forward(&mut buf);
        buf.iter_mut().zip(&self.spectrum).for_each(|(a, k)| *a *= *k);
        self.fft.inverse(&mut buf);
        let mut out = Field::zeros(self.spec);
        let o = out.as_mut_slice();
        for i in 0..n {
            for j in 0..n {
                o[i * n + j] = buf[i * m + j].re;
            }
        }
        Ok(out)
    }
}

impl QuadraticKernel {
    /// `(K a, K b)` with one complex transform pair, using that the kernel is real.
    pub fn apply_pair(&self, a: &Field, b: &Field) -> Result<(Field, Field)> {
        self.spec.ensure_same(a.spec())?;
        self.spec.ensure_same(b.spec())?;
        let (n, m) = (self.spec.n_x(), self.m);
        let mut buf = vec![Complex64::default(); m * m];
        let (sa, sb) = (a.as_slice(), b.as_slice());
        for i in 0..n {
            for j in 0..n {
                buf[i * m + j] = Complex64::new(sa[i * n + j], sb[i * n + j]);
            }
        }
        self.fft.forward(&mut buf);
        buf.iter_mut().zip(&self.spectrum).for_each(|(z, k)| *z *= *k);
        self.fft.inverse(&mut buf);
        let mut ka = Field::zeros(self.spec);
        let mut kb = Field::zeros(self.spec);
        {
            let (oa, ob) = (ka.as_mut_slice(), kb.as_mut_slice());
            for i in 0..n {
                for j in 0..n {
                    let z = buf[i * m + j];
                    oa[i * n + j] = z.re;
                    ob[i * n + j] = z.im;
                }
            }
        }
        Ok((ka, kb))
    }
}

/// One-shot convenience wrapper; prefer a cached [`QuadraticKernel`] in loops.
pub fn quadratic_kernel_convolve(spec: &GridSpec, v: &Field) -> Result<Field> {
    QuadraticKernel::new(*spec).apply(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::BoundaryCondition;

    #[test]
    fn one_hot_at_origin() {
        let g = GridSpec::new(2.0, 3, BoundaryCondition::Neumann).unwrap();
        assert_eq!(g.h_x(), 1.0);
        let mut v = Field::zeros(g);
        v[0] = 1.0;
        let out = quadratic_kernel_convolve(&g, &v).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                let expect = ((i * i + j * j) as f64) / 2.0;
                assert!((out.at(i, j) - expect).abs() < 1e-12);
            }
        }
        assert!((out.at(1, 1) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn pair_matches_two_single_applications() {
        let g = GridSpec::new(1.0, 5, BoundaryCondition::Neumann).unwrap();
        let a = Field::sample(g, |x, y| (3.0 * x).sin() + y).unwrap();
        let b = Field::sample(g, |x, y| x * y - 0.3).unwrap();
        let k = QuadraticKernel::new(g);
        let (ka, kb) = k.apply_pair(&a, &b).unwrap();
        let (ea, eb) = (k.apply(&a).unwrap(), k.apply(&b).unwrap());
        for t in 0..g.len() {
            assert!((ka[t] - ea[t]).abs() < 1e-12);
            assert!((kb[t] - eb[t]).abs() < 1e-12);
        }
    }
}
