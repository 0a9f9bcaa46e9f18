//! Banded LU factorization with partial pivoting (LINPACK gbfa/gbsl style).
//!
//! Storage is the classic packed band layout with `ml` extra superdiagonals
//! reserved for pivoting fill-in. Complex entries only; real systems embed.

use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum BandedError {
    #[error("matrix is numerically singular at column {0}")]
    Singular(usize),
}

/// LU factors of an n×n band matrix with `ml` sub- and `mu` superdiagonals.
pub struct BandedLu {
    n: usize,
    ml: usize,
    m: usize,
    lda: usize,
    abd: Vec<Complex64>,
    ipvt: Vec<usize>,
}

impl BandedLu {
    /// Factor the band matrix whose entry (i, j) is supplied by `entry`
    /// for |i - j| within the band; everything else is treated as zero.
    pub fn factor(
        n: usize,
        ml: usize,
        mu: usize,
        entry: impl Fn(usize, usize) -> Complex64,
    ) -> Result<Self, BandedError> {
        assert!(n > 0);
        let lda = 2 * ml + mu + 1;
        let m = ml + mu; // row index of the diagonal inside a packed column
        let mut abd = vec![Complex64::new(0.0, 0.0); lda * n];
        for j in 0..n {
            let i_lo = j.saturating_sub(mu);
            let i_hi = (j + ml).min(n - 1);
            for i in i_lo..=i_hi {
                abd[(i + m - j) + j * lda] = entry(i, j);
            }
        }
        let mut ipvt = vec![0usize; n];

        let mut ju = 0usize; // exclusive upper bound of columns touched by elimination
        for k in 0..n.saturating_sub(1) {
            let lm = ml.min(n - 1 - k);
            // partial pivot among the diagonal and the lm entries below it
            let mut l = 0usize;
            let mut best = cabs1(abd[m + k * lda]);
            for i in 1..=lm {
                let v = cabs1(abd[m + i + k * lda]);
                if v > best {
                    best = v;
                    l = i;
                }
            }
            ipvt[k] = k + l;
            if best == 0.0 {
                return Err(BandedError::Singular(k));
            }
            if l != 0 {
                abd.swap(m + k * lda, m + l + k * lda);
            }
            let t = -Complex64::new(1.0, 0.0) / abd[m + k * lda];
            for i in 1..=lm {
                abd[m + i + k * lda] *= t;
            }

            ju = ju.max(mu + ipvt[k] + 1).min(n);
            let mut mm = m;
            let mut lr = m + l;
            for j in (k + 1)..ju {
                lr -= 1;
                mm -= 1;
                let t = abd[lr + j * lda];
                if lr != mm {
                    abd[lr + j * lda] = abd[mm + j * lda];
                    abd[mm + j * lda] = t;
                }
                for i in 1..=lm {
                    let mult = abd[m + i + k * lda];
                    abd[mm + i + j * lda] += t * mult;
                }
            }
        }
        ipvt[n - 1] = n - 1;
        if cabs1(abd[m + (n - 1) * lda]) == 0.0 {
            return Err(BandedError::Singular(n - 1));
        }
        Ok(BandedLu {
            n,
            ml,
            m,
            lda,
            abd,
            ipvt,
        })
    }

    /// Solve A x = b in place.
    pub fn solve(&self, b: &mut [Complex64]) {
        assert_eq!(b.len(), self.n);
        let (n, m, lda) = (self.n, self.m, self.lda);
        if self.ml > 0 {
            for k in 0..n - 1 {
                let lm = self.ml.min(n - 1 - k);
                let l = self.ipvt[k];
                let t = b[l];
                if l != k {
                    b[l] = b[k];
                    b[k] = t;
                }
                for i in 1..=lm {
                    let mult = self.abd[m + i + k * lda];
                    b[k + i] += t * mult;
                }
            }
        }
        for k in (0..n).rev() {
            b[k] /= self.abd[m + k * lda];
            let lm = k.min(m);
            let t = -b[k];
            for q in 1..=lm {
                let u = self.abd[m - q + k * lda];
                b[k - q] += t * u;
            }
        }
    }
}

#[inline]
fn cabs1(z: Complex64) -> f64 {
    z.re.abs() + z.im.abs()
}
