//! Dense Hermitian eigensolver (cyclic Jacobi) for the small matrices that
//! show up in low-rank density-matrix work: Gram matrices and projected
//! density differences, k ≤ 64. Deterministic, no external linear algebra.

use num_complex::Complex64;

/// Column-major dense Hermitian matrix, size n×n.
#[derive(Debug, Clone)]
pub struct Hermitian {
    n: usize,
    data: Vec<Complex64>,
}

impl Hermitian {
    pub fn zeros(n: usize) -> Self {
        Hermitian {
            n,
            data: vec![Complex64::ZERO; n * n],
        }
    }

    pub fn from_fn(n: usize, f: impl Fn(usize, usize) -> Complex64) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                m.data[j * n + i] = f(i, j);
            }
        }
        m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.data[j * self.n + i]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Complex64) {
        self.data[j * self.n + i] = v;
    }

    /// Largest Hermiticity defect max|A_ij − conj(A_ji)|.
    pub fn hermiticity_defect(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for i in 0..self.n {
            for j in 0..self.n {
                worst = worst.max((self.get(i, j) - self.get(j, i).conj()).norm());
            }
        }
        worst
    }

    /// Eigendecomposition by cyclic Jacobi rotations. Returns eigenvalues in
    /// ascending order and the matching orthonormal eigenvectors as columns.
    pub fn eigh(&self) -> (Vec<f64>, Vec<Vec<Complex64>>) {
        let n = self.n;
        let mut a = self.clone();
        // symmetrize away roundoff-level defects so rotations stay unitary
        for i in 0..n {
            for j in (i + 1)..n {
                let v = (a.get(i, j) + a.get(j, i).conj()) * 0.5;
                a.set(i, j, v);
                a.set(j, i, v.conj());
            }
            let d = a.get(i, i);
            a.set(i, i, Complex64::new(d.re, 0.0));
        }
        let mut vectors = Hermitian::from_fn(n, |i, j| {
            if i == j {
                Complex64::ONE
            } else {
                Complex64::ZERO
            }
        });
        let scale: f64 = (0..n)
            .map(|i| a.get(i, i).norm())
            .fold(1e-300, f64::max)
            .max(off_diag_norm(&a));
        let tol = 1e-15 * scale;
        for _sweep in 0..60 {
            if off_diag_norm(&a) <= tol {
                break;
            }
            for p in 0..n {
                for q in (p + 1)..n {
                    let gamma = a.get(p, q);
                    let mag = gamma.norm();
                    if mag <= tol * 1e-2 {
                        continue;
                    }
                    let alpha = a.get(p, p).re;
                    let beta = a.get(q, q).re;
                    let phase = gamma / mag;
                    let theta = (beta - alpha) / (2.0 * mag);
                    let t = if theta >= 0.0 {
                        1.0 / (theta + (theta * theta + 1.0).sqrt())
                    } else {
                        -1.0 / (-theta + (theta * theta + 1.0).sqrt())
                    };
                    let c = 1.0 / (t * t + 1.0).sqrt();
                    let s = phase * (t * c);
                    // A ← J† A J with J acting on the (p, q) plane
                    for i in 0..n {
                        let aip = a.get(i, p);
                        let aiq = a.get(i, q);
                        a.set(i, p, aip * c - aiq * s.conj());
                        a.set(i, q, aip * s + aiq * c);
                    }
                    for j in 0..n {
                        let apj = a.get(p, j);
                        let aqj = a.get(q, j);
                        a.set(p, j, apj * c - aqj * s);
                        a.set(q, j, apj * s.conj() + aqj * c);
                    }
                    for i in 0..n {
                        let vip = vectors.get(i, p);
                        let viq = vectors.get(i, q);
                        vectors.set(i, p, vip * c - viq * s.conj());
                        vectors.set(i, q, vip * s + viq * c);
                    }
                }
            }
        }
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&i, &j| {
            a.get(i, i)
                .re
                .partial_cmp(&a.get(j, j).re)
                .expect("eigenvalue NaN")
        });
        let values: Vec<f64> = order.iter().map(|&i| a.get(i, i).re).collect();
        let vecs: Vec<Vec<Complex64>> = order
            .iter()
            .map(|&col| (0..n).map(|row| vectors.get(row, col)).collect())
            .collect();
        (values, vecs)
    }
}

fn off_diag_norm(a: &Hermitian) -> f64 {
    let n = a.n;
    let mut acc = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                acc += a.get(i, j).norm_sqr();
            }
        }
    }
    acc.sqrt()
}
