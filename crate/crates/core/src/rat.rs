//! Exact rational matrices and polynomials: fraction-free determinants,
//! characteristic polynomials by interpolation, squarefree factorization,
//! and rational kernel computations. Sized for desk-scale matrices (n ≲ 24).

use num::bigint::BigInt;
use num::rational::BigRational;
use num::traits::{One, Signed, Zero};
use num::ToPrimitive;

pub type Rat = BigRational;

pub fn rat_i64(v: i64) -> Rat {
    Rat::from_integer(BigInt::from(v))
}

pub fn rat_frac(p: i64, q: i64) -> Rat {
    Rat::new(BigInt::from(p), BigInt::from(q))
}

/// Render as "p" or "p/q" (lowest terms).
pub fn rat_to_string(r: &Rat) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn rat_from_string(s: &str) -> Option<Rat> {
    match s.split_once('/') {
        Some((p, q)) => Some(Rat::new(p.parse().ok()?, q.parse().ok()?)),
        None => Some(Rat::from_integer(s.parse().ok()?)),
    }
}

/// Dense row-major rational matrix.
#[derive(Clone, PartialEq, Eq)]
pub struct RatMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rat>,
}

impl std::fmt::Debug for RatMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "RatMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| rat_to_string(self.get(i, j))).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

impl RatMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RatMatrix { rows, cols, data: vec![Rat::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = RatMatrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Rat::one());
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Rat) -> Self {
        let mut m = RatMatrix::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m.set(i, j, f(i, j));
            }
        }
        m
    }

    pub fn from_i64_rows(rows: &[&[i64]]) -> Self {
        let r = rows.len();
        let c = if r == 0 { 0 } else { rows[0].len() };
        RatMatrix::from_fn(r, c, |i, j| rat_i64(rows[i][j]))
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> &Rat {
        &self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: Rat) {
        self.data[i * self.cols + j] = v;
    }

    pub fn transpose(&self) -> RatMatrix {
        RatMatrix::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn is_symmetric(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| (i + 1..self.cols).all(|j| self.get(i, j) == self.get(j, i)))
    }

    pub fn add(&self, other: &RatMatrix) -> RatMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        RatMatrix::from_fn(self.rows, self.cols, |i, j| self.get(i, j) + other.get(i, j))
    }

    pub fn sub(&self, other: &RatMatrix) -> RatMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        RatMatrix::from_fn(self.rows, self.cols, |i, j| self.get(i, j) - other.get(i, j))
    }

    pub fn scale(&self, s: &Rat) -> RatMatrix {
        RatMatrix::from_fn(self.rows, self.cols, |i, j| self.get(i, j) * s)
    }

    pub fn mul(&self, other: &RatMatrix) -> RatMatrix {
        assert_eq!(self.cols, other.rows);
        let mut out = RatMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let v = out.get(i, j) + a * other.get(k, j);
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Rat]) -> Vec<Rat> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.get(i, j) * &v[j]).sum())
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn trace(&self) -> Rat {
        assert_eq!(self.rows, self.cols);
        (0..self.rows).map(|i| self.get(i, i).clone()).sum()
    }

    /// Maximum absolute row sum (the ∞-operator norm), exact.
    pub fn inf_norm(&self) -> Rat {
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.get(i, j).abs()).sum())
            .max()
            .unwrap_or_else(Rat::zero)
    }

    pub fn to_f64(&self) -> nalgebra::DMatrix<f64> {
        nalgebra::DMatrix::from_fn(self.rows, self.cols, |i, j| {
            self.get(i, j).to_f64().expect("rational fits f64")
        })
    }

    /// Exact determinant via Bareiss fraction-free elimination. Denominators
    /// are cleared row-by-row first so all pivoting work happens in integers.
    pub fn bareiss_det(&self) -> Rat {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        if n == 0 {
            return Rat::one();
        }
        let mut scale = BigInt::one();
        let mut m: Vec<Vec<BigInt>> = Vec::with_capacity(n);
        for i in 0..n {
            let mut lcm = BigInt::one();
            for j in 0..n {
                lcm = num::integer::lcm(lcm, self.get(i, j).denom().clone());
            }
            scale *= &lcm;
            m.push(
                (0..n)
                    .map(|j| {
                        let r = self.get(i, j);
                        r.numer() * (&lcm / r.denom())
                    })
                    .collect(),
            );
        }
        let mut sign = 1i32;
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if m[k][k].is_zero() {
                match (k + 1..n).find(|&i| !m[i][k].is_zero()) {
                    Some(p) => {
                        m.swap(k, p);
                        sign = -sign;
                    }
                    None => return Rat::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                    m[i][j] = num / &prev; // exact division, the Bareiss identity
                }
                m[i][k] = BigInt::zero();
            }
            prev = m[k][k].clone();
        }
        let det_int = m[n - 1][n - 1].clone() * BigInt::from(sign);
        Rat::new(det_int, scale)
    }

    /// Monic characteristic polynomial det(xI − A), exact. Evaluated by
    /// Bareiss determinants at n+1 integer points and interpolated.
    pub fn char_poly(&self) -> RatPoly {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let points: Vec<Rat> = (0..=n as i64).map(rat_i64).collect();
        let values: Vec<Rat> = points
            .iter()
            .map(|x| {
                let m = RatMatrix::from_fn(n, n, |i, j| {
                    let d = if i == j { x.clone() } else { Rat::zero() };
                    d - self.get(i, j)
                });
                m.bareiss_det()
            })
            .collect();
        let poly = RatPoly::interpolate(&points, &values);
        debug_assert_eq!(poly.degree(), n);
        poly
    }

    /// Rank over the rationals by Gaussian elimination.
    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        let (rows, cols) = (m.rows, m.cols);
        let mut rank = 0usize;
        let mut row = 0usize;
        for col in 0..cols {
            let pivot = (row..rows).find(|&i| !m.get(i, col).is_zero());
            let Some(p) = pivot else { continue };
            if p != row {
                for j in 0..cols {
                    let a = m.get(row, j).clone();
                    let b = m.get(p, j).clone();
                    m.set(row, j, b);
                    m.set(p, j, a);
                }
            }
            let inv = m.get(row, col).recip();
            for j in col..cols {
                let v = m.get(row, j) * &inv;
                m.set(row, j, v);
            }
            for i in 0..rows {
                if i != row && !m.get(i, col).is_zero() {
                    let f = m.get(i, col).clone();
                    for j in col..cols {
                        let v = m.get(i, j) - &f * m.get(row, j);
                        m.set(i, j, v);
                    }
                }
            }
            rank += 1;
            row += 1;
            if row == rows {
                break;
            }
        }
        rank
    }

    pub fn kernel_dimension(&self) -> usize {
        self.cols - self.rank()
    }
}

// ---------------------------------------------------------------- RatPoly

/// Polynomial over the rationals, coefficients in ascending degree order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatPoly {
    coeffs: Vec<Rat>,
}

impl RatPoly {
    pub fn new(mut coeffs: Vec<Rat>) -> Self {
        while coeffs.len() > 1 && coeffs.last().map(Rat::is_zero).unwrap_or(false) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(Rat::zero());
        }
        RatPoly { coeffs }
    }

    pub fn zero() -> Self {
        RatPoly { coeffs: vec![Rat::zero()] }
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Rat::is_zero)
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn eval(&self, x: &Rat) -> Rat {
        let mut acc = Rat::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn derivative(&self) -> RatPoly {
        if self.coeffs.len() <= 1 {
            return RatPoly::zero();
        }
        RatPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * rat_i64(i as i64))
                .collect(),
        )
    }

    pub fn monic(&self) -> RatPoly {
        let lead = self.coeffs.last().expect("nonempty");
        if lead.is_zero() || lead.is_one() {
            return self.clone();
        }
        let inv = lead.recip();
        RatPoly::new(self.coeffs.iter().map(|c| c * &inv).collect())
    }

    pub fn mul(&self, other: &RatPoly) -> RatPoly {
        let mut out = vec![Rat::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] = &out[i + j] + a * b;
            }
        }
        RatPoly::new(out)
    }

    /// Quotient and remainder of polynomial division.
    pub fn div_rem(&self, divisor: &RatPoly) -> (RatPoly, RatPoly) {
        assert!(!divisor.is_zero(), "division by zero polynomial");
        let mut rem = self.coeffs.clone();
        let dd = divisor.degree();
        if self.degree() < dd || self.is_zero() {
            return (RatPoly::zero(), self.clone());
        }
        let mut quot = vec![Rat::zero(); self.degree() - dd + 1];
        let lead_inv = divisor.coeffs[dd].recip();
        for k in (0..quot.len()).rev() {
            let c = &rem[k + dd] * &lead_inv;
            if !c.is_zero() {
                for j in 0..=dd {
                    rem[k + j] = &rem[k + j] - &c * &divisor.coeffs[j];
                }
            }
            quot[k] = c;
        }
        (RatPoly::new(quot), RatPoly::new(rem))
    }

    /// Monic greatest common divisor (Euclid).
    pub fn gcd(&self, other: &RatPoly) -> RatPoly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r;
        }
        if a.is_zero() {
            a
        } else {
            a.monic()
        }
    }

    /// Squarefree decomposition (Yun): returns `(f_i, i)` with
    /// `self = lead · Π f_i^i` and each `f_i` squarefree, deg f_i ≥ 1.
    pub fn squarefree_decomposition(&self) -> Vec<(RatPoly, usize)> {
        let f = self.monic();
        if f.degree() == 0 {
            return Vec::new();
        }
        let df = f.derivative();
        let a0 = f.gcd(&df);
        let mut b = f.div_rem(&a0).0;
        let mut c = df.div_rem(&a0).0;
        let mut d = c.sub(&b.derivative());
        let mut out = Vec::new();
        let mut i = 1usize;
        loop {
            let a = b.gcd(&d);
            if a.degree() >= 1 {
                out.push((a.clone(), i));
            }
            b = b.div_rem(&a).0;
            if b.degree() == 0 {
                break;
            }
            c = d.div_rem(&a).0;
            d = c.sub(&b.derivative());
            i += 1;
        }
        out
    }

    fn sub(&self, other: &RatPoly) -> RatPoly {
        let len = self.coeffs.len().max(other.coeffs.len());
        let mut out = vec![Rat::zero(); len];
        for (i, c) in self.coeffs.iter().enumerate() {
            out[i] = c.clone();
        }
        for (i, c) in other.coeffs.iter().enumerate() {
            out[i] = &out[i] - c;
        }
        RatPoly::new(out)
    }

    /// Number of distinct complex roots: degree of the squarefree part.
    pub fn distinct_root_count(&self) -> usize {
        self.squarefree_decomposition().iter().map(|(f, _)| f.degree()).sum()
    }

    /// Lagrange interpolation through `(points[i], values[i])`, exact.
    pub fn interpolate(points: &[Rat], values: &[Rat]) -> RatPoly {
        assert_eq!(points.len(), values.len());
        let mut acc = RatPoly::zero();
        for (i, (xi, yi)) in points.iter().zip(values).enumerate() {
            if yi.is_zero() {
                continue;
            }
            let mut basis = RatPoly::new(vec![Rat::one()]);
            let mut denom = Rat::one();
            for (j, xj) in points.iter().enumerate() {
                if i == j {
                    continue;
                }
                basis = basis.mul(&RatPoly::new(vec![-xj.clone(), Rat::one()]));
                denom *= xi - xj;
            }
            let w = yi / denom;
            acc = acc.add(&basis.scale(&w));
        }
        acc
    }

    fn add(&self, other: &RatPoly) -> RatPoly {
        let len = self.coeffs.len().max(other.coeffs.len());
        let mut out = vec![Rat::zero(); len];
        for (i, c) in self.coeffs.iter().enumerate() {
            out[i] = c.clone();
        }
        for (i, c) in other.coeffs.iter().enumerate() {
            out[i] = &out[i] + c;
        }
        RatPoly::new(out)
    }

    fn scale(&self, s: &Rat) -> RatPoly {
        RatPoly::new(self.coeffs.iter().map(|c| c * s).collect())
    }

    /// Roots with multiplicity when every root is rational; `None` otherwise.
    pub fn rational_roots_with_multiplicity(&self) -> Option<Vec<(Rat, usize)>> {
        let mut out = Vec::new();
        for (factor, mult) in self.squarefree_decomposition() {
            let mut f = factor;
            // peel rational roots from the squarefree factor
            while f.degree() >= 1 {
                let root = f.find_rational_root()?;
                let lin = RatPoly::new(vec![-root.clone(), Rat::one()]);
                let (q, r) = f.div_rem(&lin);
                debug_assert!(r.is_zero());
                out.push((root, mult));
                f = q;
            }
        }
        out.sort_by(|a, b| a.0.cmp(&b.0));
        Some(out)
    }

    fn find_rational_root(&self) -> Option<Rat> {
        // Clear denominators, then apply the rational root theorem.
        let mut lcm = BigInt::one();
        for c in &self.coeffs {
            lcm = num::integer::lcm(lcm, c.denom().clone());
        }
        let ints: Vec<BigInt> = self.coeffs.iter().map(|c| c.numer() * (&lcm / c.denom())).collect();
        let a0 = ints.first()?.clone();
        let an = ints.last()?.clone();
        if a0.is_zero() {
            return Some(Rat::zero());
        }
        let ps = small_divisors(&a0.abs());
        let qs = small_divisors(&an.abs());
        for p in &ps {
            for q in &qs {
                for sgn in [1i64, -1] {
                    let cand = Rat::new(p * BigInt::from(sgn), q.clone());
                    if self.eval(&cand).is_zero() {
                        return Some(cand);
                    }
                }
            }
        }
        None
    }
}

fn small_divisors(n: &BigInt) -> Vec<BigInt> {
    // Trial division; adequate for the small integers seen in practice.
    let mut out = Vec::new();
    if let Some(v) = n.to_u64() {
        let mut d = 1u64;
        while (d as u128) * (d as u128) <= v as u128 {
            if v % d == 0 {
                out.push(BigInt::from(d));
                out.push(BigInt::from(v / d));
            }
            d += 1;
        }
    } else {
        out.push(BigInt::one());
        out.push(n.clone());
    }
    out.sort();
    out.dedup();
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bareiss_small_dets() {
        let m = RatMatrix::from_i64_rows(&[&[2, 1], &[7, 4]]);
        assert_eq!(m.bareiss_det(), rat_i64(1));
        let m = RatMatrix::from_i64_rows(&[&[0, 1, 2], &[1, 0, 3], &[4, 5, 0]]);
        // det = 0*(0-15) - 1*(0-12) + 2*(5-0) = 22
        assert_eq!(m.bareiss_det(), rat_i64(22));
        let singular = RatMatrix::from_i64_rows(&[&[1, 2], &[2, 4]]);
        assert_eq!(singular.bareiss_det(), rat_i64(0));
        // rational entries
        let m = RatMatrix::from_fn(2, 2, |i, j| rat_frac(1, (i + j + 1) as i64));
        // det = 1*1/3 - 1/2*1/2 = 1/12
        assert_eq!(m.bareiss_det(), rat_frac(1, 12));
    }

    #[test]
    fn char_poly_diag_and_squarefree() {
        let m = RatMatrix::from_i64_rows(&[&[2, 0, 0], &[0, 2, 0], &[0, 0, 5]]);
        let p = m.char_poly();
        // (x-2)^2 (x-5) = x^3 - 9x^2 + 24x - 20
        assert_eq!(
            p.coeffs().to_vec(),
            vec![rat_i64(-20), rat_i64(24), rat_i64(-9), rat_i64(1)]
        );
        assert_eq!(p.distinct_root_count(), 2);
        let roots = p.rational_roots_with_multiplicity().unwrap();
        assert_eq!(roots, vec![(rat_i64(2), 2), (rat_i64(5), 1)]);
    }

    #[test]
    fn char_poly_irrational_eigenvalues() {
        // [[0,2],[2,0]] has eigenvalues ±2; [[0,1],[2,0]] asymmetric not used.
        // x^2 - 2 case:
        let m = RatMatrix::from_i64_rows(&[&[0, 1], &[2, 0]]);
        let p = m.char_poly();
        assert_eq!(p.coeffs().to_vec(), vec![rat_i64(-2), rat_i64(0), rat_i64(1)]);
        assert_eq!(p.distinct_root_count(), 2);
        assert!(p.rational_roots_with_multiplicity().is_none());
    }

    #[test]
    fn yun_multiplicities() {
        // p = (x-1)^3 (x+2)^2
        let f1 = RatPoly::new(vec![rat_i64(-1), rat_i64(1)]);
        let f2 = RatPoly::new(vec![rat_i64(2), rat_i64(1)]);
        let p = f1.mul(&f1).mul(&f1).mul(&f2).mul(&f2);
        let dec = p.squarefree_decomposition();
        assert_eq!(dec.len(), 2);
        let mults: Vec<usize> = dec.iter().map(|(_, m)| *m).collect();
        assert_eq!(mults, vec![2, 3]);
        assert_eq!(p.distinct_root_count(), 2);
    }

    #[test]
    fn rank_and_kernel() {
        let m = RatMatrix::from_i64_rows(&[&[1, 2, 3], &[2, 4, 6], &[1, 1, 1]]);
        assert_eq!(m.rank(), 2);
        assert_eq!(m.kernel_dimension(), 1);
        assert_eq!(RatMatrix::identity(4).rank(), 4);
        assert_eq!(RatMatrix::zeros(3, 5).kernel_dimension(), 5);
    }

    #[test]
    fn interpolation_roundtrip() {
        let p = RatPoly::new(vec![rat_i64(3), rat_i64(-2), rat_i64(0), rat_i64(7)]);
        let points: Vec<Rat> = (0..4).map(rat_i64).collect();
        let values: Vec<Rat> = points.iter().map(|x| p.eval(x)).collect();
        assert_eq!(RatPoly::interpolate(&points, &values), p);
    }
}
