//! Iterative radix-2 Cooley-Tukey transform for power-of-two lengths.
//!
//! Both directions are unnormalized; callers choose the scaling. Twiddles are
//! evaluated directly with `sin_cos` instead of by recurrence so that
//! round-off does not accumulate across stages.

use std::f64::consts::PI;

use num_complex::Complex64;

#[derive(Debug, Clone)]
pub struct FftPlan {
    n: usize,
    /// `exp(-2*pi*i*j/n)` for `j < n/2`.
    twiddles: Vec<Complex64>,
    bit_reverse: Vec<usize>,
}

impl FftPlan {
    /// Panics if `n` is not a power of two.
    pub fn new(n: usize) -> Self {
        assert!(n.is_power_of_two(), "FFT length {n} is not a power of two");
        let twiddles = (0..n / 2)
            .map(|j| {
                let (s, c) = (-2.0 * PI * j as f64 / n as f64).sin_cos();
                Complex64::new(c, s)
            })
            .collect();
        let bits = n.trailing_zeros();
        let bit_reverse = (0..n)
            .map(|i| {
                if bits == 0 {
                    0
                } else {
                    i.reverse_bits() >> (usize::BITS - bits)
                }
            })
            .collect();
        Self {
            n,
            twiddles,
            bit_reverse,
        }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    /// In-place `X_k = sum_j x_j exp(-2 pi i jk/n)`.
    pub fn forward(&self, data: &mut [Complex64]) {
        self.transform(data, false);
    }

    /// In-place `x_j = sum_k X_k exp(+2 pi i jk/n)` (no `1/n`).
    pub fn inverse(&self, data: &mut [Complex64]) {
        self.transform(data, true);
    }

    fn transform(&self, data: &mut [Complex64], inverse: bool) {
        assert_eq!(data.len(), self.n, "FFT buffer length mismatch");
        for (i, &j) in self.bit_reverse.iter().enumerate() {
            if i < j {
                data.swap(i, j);
            }
        }
        let mut half = 1;
        while half < self.n {
            let stride = self.n / (2 * half);
            for start in (0..self.n).step_by(2 * half) {
                for j in 0..half {
                    let mut w = self.twiddles[j * stride];
                    if inverse {
                        w = w.conj();
                    }
                    let a = data[start + j];
                    let b = data[start + j + half] * w;
                    data[start + j] = a + b;
                    data[start + j + half] = a - b;
                }
            }
            half *= 2;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn naive(x: &[Complex64], sign: f64) -> Vec<Complex64> {
        let n = x.len();
        (0..n)
            .map(|k| {
                x.iter()
                    .enumerate()
                    .map(|(j, &v)| {
                        let (s, c) = (sign * 2.0 * PI * ((j * k) % n) as f64 / n as f64).sin_cos();
                        v * Complex64::new(c, s)
                    })
                    .sum()
            })
            .collect()
    }

    #[test]
    fn matches_naive_sum_on_small_sizes() {
        for n in [1usize, 2, 4, 8, 16, 32] {
            let x: Vec<Complex64> = (0..n)
                .map(|j| Complex64::new((j as f64 * 0.7).sin(), (j as f64 * 1.3).cos()))
                .collect();
            let plan = FftPlan::new(n);
            let mut fwd = x.clone();
            plan.forward(&mut fwd);
            for (a, b) in fwd.iter().zip(naive(&x, -1.0)) {
                assert!((a - b).norm() < 1e-12, "n={n}");
            }
            let mut inv = x.clone();
            plan.inverse(&mut inv);
            for (a, b) in inv.iter().zip(naive(&x, 1.0)) {
                assert!((a - b).norm() < 1e-12, "n={n}");
            }
        }
    }

    #[test]
    #[should_panic]
    fn rejects_non_power_of_two() {
        FftPlan::new(12);
    }
}
