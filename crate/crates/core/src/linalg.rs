//! Dense complex linear algebra for the single-excitation generator.

use ndarray::Array2;
use num_complex::Complex;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Right eigen-decomposition of a general complex matrix.
#[derive(Debug, Clone)]
pub struct Eigen<T> {
    pub values: Vec<Complex<T>>,
    /// Unit-norm eigenvectors as columns, in the order of `values`.
    pub vectors: Array2<Complex<T>>,
    pub iterations: usize,
}

fn abs1<T: Real>(z: Complex<T>) -> T {
    z.re.abs() + z.im.abs()
}

pub fn frobenius<T: Real>(a: &Array2<Complex<T>>) -> T {
    a.iter().fold(T::zero(), |s, z| s + z.norm_sqr()).sqrt()
}

/// Maximum absolute column sum.
pub fn norm_one<T: Real>(a: &Array2<Complex<T>>) -> T {
    a.columns()
        .into_iter()
        .map(|c| c.iter().fold(T::zero(), |s, z| s + z.norm()))
        .fold(T::zero(), T::max)
}

/// Householder reduction to upper Hessenberg form: returns `(H, Q)` with
/// `A = Q H Q†`.
fn hessenberg<T: Real>(a: &Array2<Complex<T>>) -> (Array2<Complex<T>>, Array2<Complex<T>>) {
    let n = a.nrows();
    let mut h = a.clone();
    let mut q = Array2::<Complex<T>>::eye(n);
    let two = T::lit(2.0);
    for k in 0..n.saturating_sub(2) {
        let alpha = (k + 1..n).fold(T::zero(), |s, i| s + h[[i, k]].norm_sqr()).sqrt();
        if alpha == T::zero() {
            continue;
        }
        let x0 = h[[k + 1, k]];
        let phase = if x0.norm() == T::zero() { Complex::one() } else { x0 / x0.norm() };
        let beta = -phase * alpha;
        let mut v: Vec<Complex<T>> = (k + 1..n).map(|i| h[[i, k]]).collect();
        v[0] = v[0] - beta;
        let vnorm = v.iter().fold(T::zero(), |s, z| s + z.norm_sqr()).sqrt();
        if vnorm == T::zero() {
            continue;
        }
        for z in v.iter_mut() {
            *z = *z / vnorm;
        }
        // H <- P H
        for j in k..n {
            let s = v.iter().enumerate().fold(Complex::zero(), |s, (i, vi)| s + vi.conj() * h[[k + 1 + i, j]]);
            for (i, vi) in v.iter().enumerate() {
                h[[k + 1 + i, j]] = h[[k + 1 + i, j]] - *vi * s * two;
            }
        }
        // H <- H P, Q <- Q P
        for m in [&mut h, &mut q] as [&mut Array2<Complex<T>>; 2] {
            for i in 0..n {
                let s = v.iter().enumerate().fold(Complex::<T>::zero(), |s, (j, vj)| s + m[[i, k + 1 + j]] * *vj);
                for (j, vj) in v.iter().enumerate() {
                    m[[i, k + 1 + j]] = m[[i, k + 1 + j]] - s * vj.conj() * two;
                }
            }
        }
        h[[k + 1, k]] = beta;
        for i in k + 2..n {
            h[[i, k]] = Complex::zero();
        }
    }
    (h, q)
}

/// Givens rotation `[c s; -conj(s) c]` mapping `(a, b)` to `(r, 0)`.
fn givens<T: Real>(a: Complex<T>, b: Complex<T>) -> (T, Complex<T>) {
    let na = a.norm();
    let nb = b.norm();
    if nb == T::zero() {
        return (T::one(), Complex::zero());
    }
    if na == T::zero() {
        return (T::zero(), b.conj() / nb);
    }
    let r = na.hypot(nb);
    (na / r, (a / na) * b.conj() / r)
}

/// Shift from the trailing 2×2 block, the eigenvalue closer to `d`.
fn wilkinson<T: Real>(a: Complex<T>, b: Complex<T>, c: Complex<T>, d: Complex<T>) -> Complex<T> {
    let half = T::lit(0.5);
    let mean = (a + d) * half;
    let diff = (a - d) * half;
    let root = (diff * diff + b * c).sqrt();
    let l1 = mean + root;
    let l2 = mean - root;
    if (l1 - d).norm() <= (l2 - d).norm() {
        l1
    } else {
        l2
    }
}

/// Eigenvalues and right eigenvectors of a general complex matrix via
/// Hessenberg reduction, shifted QR to Schur form and back-substitution.
pub fn eig<T: Real>(a: &Array2<Complex<T>>) -> Result<Eigen<T>> {
    let n = a.nrows();
    if a.ncols() != n {
        return Err(Error::DimensionMismatch { expected: n, actual: a.ncols() });
    }
    if n == 0 {
        return Ok(Eigen { values: vec![], vectors: Array2::zeros((0, 0)), iterations: 0 });
    }
    let (mut h, mut z) = hessenberg(a);
    let eps = T::epsilon();
    let scale = frobenius(&h).max(T::min_positive_value());
    let max_iter = 60 * n.max(1);
    let mut total_iter = 0usize;
    let mut since_deflation = 0usize;
    let mut hi = n - 1;
    while hi > 0 {
        let mut l = hi;
        while l > 0 {
            let off = abs1(h[[l, l - 1]]);
            let mut diag = abs1(h[[l - 1, l - 1]]) + abs1(h[[l, l]]);
            if diag == T::zero() {
                diag = scale;
            }
            if off <= eps * diag {
                h[[l, l - 1]] = Complex::zero();
                break;
            }
            l -= 1;
        }
        if l == hi {
            hi -= 1;
            since_deflation = 0;
            continue;
        }
        total_iter += 1;
        since_deflation += 1;
        if total_iter > max_iter {
            let residual = abs1(h[[hi, hi - 1]]).to_f64_lossy();
            return Err(Error::EigenNotConverged { iterations: total_iter, residual });
        }
        let mu = if since_deflation % 11 == 10 {
            // exceptional shift to break cycles
            h[[hi, hi]] + Complex::new(T::lit(0.75) * abs1(h[[hi, hi - 1]]), T::zero())
        } else {
            wilkinson(h[[hi - 1, hi - 1]], h[[hi - 1, hi]], h[[hi, hi - 1]], h[[hi, hi]])
        };
        for k in l..=hi {
            h[[k, k]] = h[[k, k]] - mu;
        }
        let mut rotations = Vec::with_capacity(hi - l);
        for k in l..hi {
            let (c, s) = givens(h[[k, k]], h[[k + 1, k]]);
            for j in k..n {
                let x = h[[k, j]];
                let y = h[[k + 1, j]];
                h[[k, j]] = x * c + s * y;
                h[[k + 1, j]] = -s.conj() * x + y * c;
            }
            h[[k + 1, k]] = Complex::zero();
            rotations.push((c, s));
        }
        for (offset, &(c, s)) in rotations.iter().enumerate() {
            let k = l + offset;
            for i in 0..=(k + 1).min(hi) {
                let x = h[[i, k]];
                let y = h[[i, k + 1]];
                h[[i, k]] = x * c + y * s.conj();
                h[[i, k + 1]] = -x * s + y * c;
            }
            for i in 0..n {
                let x = z[[i, k]];
                let y = z[[i, k + 1]];
                z[[i, k]] = x * c + y * s.conj();
                z[[i, k + 1]] = -x * s + y * c;
            }
        }
        for k in l..=hi {
            h[[k, k]] = h[[k, k]] + mu;
        }
    }

    let values: Vec<Complex<T>> = (0..n).map(|k| h[[k, k]]).collect();
    let small = eps * scale;
    let big = T::one() / eps;
    let mut vectors = Array2::<Complex<T>>::zeros((n, n));
    let mut x = vec![Complex::zero(); n];
    for k in 0..n {
        x.iter_mut().for_each(|v| *v = Complex::zero());
        x[k] = Complex::one();
        for j in (0..k).rev() {
            let mut s = Complex::<T>::zero();
            for i in j + 1..=k {
                s = s + h[[j, i]] * x[i];
            }
            let mut d = h[[j, j]] - values[k];
            if d.norm() < small {
                d = Complex::new(small, T::zero());
            }
            x[j] = -s / d;
            let m = x[j].norm();
            if m > big {
                for v in x.iter_mut().take(k + 1) {
                    *v = *v / m;
                }
            }
        }
        let mut norm = T::zero();
        for i in 0..n {
            let mut s = Complex::<T>::zero();
            for (j, xj) in x.iter().enumerate().take(k + 1) {
                s = s + z[[i, j]] * *xj;
            }
            vectors[[i, k]] = s;
            norm = norm + s.norm_sqr();
        }
        let norm = norm.sqrt();
        for i in 0..n {
            vectors[[i, k]] = vectors[[i, k]] / norm;
        }
    }
    Ok(Eigen { values, vectors, iterations: total_iter })
}

/// Inverse by LU decomposition with partial pivoting.
pub fn inverse<T: Real>(a: &Array2<Complex<T>>) -> Result<Array2<Complex<T>>> {
    let n = a.nrows();
    if a.ncols() != n {
        return Err(Error::DimensionMismatch { expected: n, actual: a.ncols() });
    }
    let mut lu = a.clone();
    let mut perm: Vec<usize> = (0..n).collect();
    let threshold = T::epsilon() * norm_one(a);
    for k in 0..n {
        let (p, pivot) = (k..n)
            .map(|i| (i, lu[[i, k]].norm()))
            .fold((k, T::lit(-1.0)), |best, cur| if cur.1 > best.1 { cur } else { best });
        if !(pivot > threshold) {
            return Err(Error::IllConditioned { condition: f64::INFINITY, limit: f64::INFINITY });
        }
        if p != k {
            for j in 0..n {
                lu.swap([k, j], [p, j]);
            }
            perm.swap(k, p);
        }
        let d = lu[[k, k]];
        for i in k + 1..n {
            let factor = lu[[i, k]] / d;
            lu[[i, k]] = factor;
            for j in k + 1..n {
                lu[[i, j]] = lu[[i, j]] - factor * lu[[k, j]];
            }
        }
    }
    let mut inv = Array2::<Complex<T>>::zeros((n, n));
    for col in 0..n {
        // solve L U x = P e_col
        let mut x: Vec<Complex<T>> = perm.iter().map(|&p| if p == col { Complex::one() } else { Complex::zero() }).collect();
        for i in 0..n {
            for j in 0..i {
                x[i] = x[i] - lu[[i, j]] * x[j];
            }
        }
        for i in (0..n).rev() {
            for j in i + 1..n {
                x[i] = x[i] - lu[[i, j]] * x[j];
            }
            x[i] = x[i] / lu[[i, i]];
        }
        for i in 0..n {
            inv[[i, col]] = x[i];
        }
    }
    Ok(inv)
}

/// Eigenvalues of a real symmetric matrix by cyclic Jacobi rotations,
/// ascending.
pub fn symmetric_eigenvalues<T: Real>(a: &Array2<T>) -> Vec<T> {
    let n = a.nrows();
    let mut m = a.clone();
    let total = m.iter().fold(T::zero(), |s, &v| s + v * v).sqrt();
    for _sweep in 0..100 {
        let mut off = T::zero();
        for i in 0..n {
            for j in 0..i {
                off = off + m[[i, j]] * m[[i, j]];
            }
        }
        if off.sqrt() <= T::epsilon() * total {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = m[[p, q]];
                if apq == T::zero() {
                    continue;
                }
                let theta = (m[[q, q]] - m[[p, p]]) / (T::lit(2.0) * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + T::one()).sqrt());
                let c = T::one() / (t * t + T::one()).sqrt();
                let s = t * c;
                for k in 0..n {
                    let mkp = m[[k, p]];
                    let mkq = m[[k, q]];
                    m[[k, p]] = c * mkp - s * mkq;
                    m[[k, q]] = s * mkp + c * mkq;
                }
                for k in 0..n {
                    let mpk = m[[p, k]];
                    let mqk = m[[q, k]];
                    m[[p, k]] = c * mpk - s * mqk;
                    m[[q, k]] = s * mpk + c * mqk;
                }
            }
        }
    }
    let mut vals: Vec<T> = (0..n).map(|i| m[[i, i]]).collect();
    vals.sort_by(|a, b| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal));
    vals
}
