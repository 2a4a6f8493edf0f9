//! Integer polynomial matrices and truncated power-series matrices.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};

/// Default truncation order for dual series.
pub const DEFAULT_SERIES_ORDER: usize = 20;

/// Polynomial in `t` with integer coefficients, lowest degree first.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Poly {
    coeffs: Vec<BigInt>,
}

impl Poly {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn from_i64s(coeffs: Vec<i64>) -> Self {
        Poly::new(coeffs.into_iter().map(BigInt::from).collect())
    }

    pub fn zero() -> Self {
        Poly::default()
    }

    pub fn one() -> Self {
        Poly::from_i64s(vec![1])
    }

    /// `(1 + s·t)^n`.
    pub fn binomial_power(s: i64, n: usize) -> Self {
        let base = Poly::from_i64s(vec![1, s]);
        (0..n).fold(Poly::one(), |acc, _| &acc * &base)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeff(&self, i: usize) -> BigInt {
        self.coeffs.get(i).cloned().unwrap_or_default()
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    /// `p(-t)`.
    pub fn negate_variable(&self) -> Poly {
        Poly::new(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(i, c)| if i % 2 == 1 { -c } else { c.clone() })
                .collect(),
        )
    }

    pub fn eval(&self, t: &BigInt) -> BigInt {
        self.coeffs
            .iter()
            .rev()
            .fold(BigInt::zero(), |acc, c| acc * t + c)
    }
}

impl std::ops::Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new((0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl std::ops::Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new((0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }
}

impl std::ops::Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly::new(out)
    }
}

impl std::ops::Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            first = false;
            let show_mag = i == 0 || !mag.is_one();
            if show_mag {
                write!(f, "{mag}")?;
            }
            match i {
                0 => {}
                1 => write!(f, "t")?,
                _ => write!(f, "t^{i}")?,
            }
        }
        Ok(())
    }
}

/// Square matrix of integer polynomials with vertex labels.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyMatrix {
    labels: Vec<String>,
    entries: Vec<Vec<Poly>>,
}

impl PolyMatrix {
    pub fn new(labels: Vec<String>, entries: Vec<Vec<Poly>>) -> Self {
        assert_eq!(labels.len(), entries.len(), "label count");
        assert!(entries.iter().all(|r| r.len() == labels.len()), "square");
        PolyMatrix { labels, entries }
    }

    pub fn from_i64s(labels: Vec<String>, entries: Vec<Vec<Vec<i64>>>) -> Self {
        let entries = entries
            .into_iter()
            .map(|row| row.into_iter().map(Poly::from_i64s).collect())
            .collect();
        PolyMatrix::new(labels, entries)
    }

    pub fn identity(labels: Vec<String>) -> Self {
        let n = labels.len();
        let entries = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| if i == j { Poly::one() } else { Poly::zero() })
                    .collect()
            })
            .collect();
        PolyMatrix::new(labels, entries)
    }

    pub fn size(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn entry(&self, i: usize, j: usize) -> &Poly {
        &self.entries[i][j]
    }

    pub fn transpose(&self) -> PolyMatrix {
        let n = self.size();
        let entries = (0..n)
            .map(|i| (0..n).map(|j| self.entries[j][i].clone()).collect())
            .collect();
        PolyMatrix::new(self.labels.clone(), entries)
    }

    pub fn negate_variable(&self) -> PolyMatrix {
        let entries = self
            .entries
            .iter()
            .map(|r| r.iter().map(Poly::negate_variable).collect())
            .collect();
        PolyMatrix::new(self.labels.clone(), entries)
    }

    /// Matrix of `t^k` coefficients.
    fn coefficient(&self, k: usize) -> Vec<Vec<BigRational>> {
        self.entries
            .iter()
            .map(|r| r.iter().map(|p| BigRational::from_integer(p.coeff(k))).collect())
            .collect()
    }

    fn max_degree(&self) -> usize {
        self.entries
            .iter()
            .flatten()
            .filter_map(Poly::degree)
            .max()
            .unwrap_or(0)
    }

    /// Determinant by expansion over column subsets.
    pub fn det(&self) -> Poly {
        let n = self.size();
        if n == 0 {
            return Poly::one();
        }
        // minors[mask] = det of rows (n - |mask|).. with columns in mask.
        let full = (1usize << n) - 1;
        let mut minors = vec![Poly::zero(); 1 << n];
        minors[0] = Poly::one();
        for mask in 1..=full {
            let row = n - mask.count_ones() as usize;
            let mut acc = Poly::zero();
            let mut position = 0;
            for col in 0..n {
                if mask & (1 << col) == 0 {
                    continue;
                }
                let term = &self.entries[row][col] * &minors[mask & !(1 << col)];
                acc = if position % 2 == 0 { &acc + &term } else { &acc - &term };
                position += 1;
            }
            minors[mask] = acc;
        }
        minors[full].clone()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "labels": self.labels,
            "entries": self.entries.iter().map(|r| r.iter().map(|p| p.to_string()).collect::<Vec<_>>()).collect::<Vec<_>>(),
        })
    }
}

impl fmt::Display for PolyMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cells: Vec<Vec<String>> = self
            .entries
            .iter()
            .map(|r| r.iter().map(|p| p.to_string()).collect())
            .collect();
        let width = cells.iter().flatten().map(|s| s.chars().count()).max().unwrap_or(1);
        let lw = self.labels.iter().map(|s| s.chars().count()).max().unwrap_or(1);
        write!(f, "{:lw$} ", "")?;
        for l in &self.labels {
            write!(f, "| {l:width$} ")?;
        }
        writeln!(f)?;
        for (l, row) in self.labels.iter().zip(&cells) {
            write!(f, "{l:lw$} ")?;
            for c in row {
                write!(f, "| {c:width$} ")?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

#[derive(Debug, thiserror::Error, Clone, PartialEq, Eq)]
#[error("constant term of the matrix is singular")]
pub struct SingularConstantTerm;

/// Square matrix of power series truncated after `t^order`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeriesMatrix {
    labels: Vec<String>,
    order: usize,
    /// `coeffs[k][i][j]` is the `t^k` coefficient of entry `(i, j)`.
    coeffs: Vec<Vec<Vec<BigRational>>>,
}

impl SeriesMatrix {
    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn size(&self) -> usize {
        self.labels.len()
    }

    pub fn coeff(&self, i: usize, j: usize, k: usize) -> &BigRational {
        &self.coeffs[k][i][j]
    }

    pub fn entry_coeffs(&self, i: usize, j: usize) -> Vec<BigRational> {
        (0..=self.order).map(|k| self.coeffs[k][i][j].clone()).collect()
    }

    pub fn set_coeff(&mut self, i: usize, j: usize, k: usize, value: BigRational) {
        self.coeffs[k][i][j] = value;
    }

    pub fn truncate(&self, order: usize) -> SeriesMatrix {
        let order = order.min(self.order);
        SeriesMatrix {
            labels: self.labels.clone(),
            order,
            coeffs: self.coeffs[..=order].to_vec(),
        }
    }

    /// `pm · self`, truncated at `self.order`.
    pub fn left_mul_poly(&self, pm: &PolyMatrix) -> SeriesMatrix {
        let n = self.size();
        let mut coeffs = vec![vec![vec![BigRational::zero(); n]; n]; self.order + 1];
        for (k, out) in coeffs.iter_mut().enumerate() {
            for a in 0..=k {
                let pa = pm.coefficient(a);
                let sb = &self.coeffs[k - a];
                for i in 0..n {
                    for j in 0..n {
                        for l in 0..n {
                            if !pa[i][l].is_zero() && !sb[l][j].is_zero() {
                                out[i][j] += &pa[i][l] * &sb[l][j];
                            }
                        }
                    }
                }
            }
        }
        SeriesMatrix {
            labels: self.labels.clone(),
            order: self.order,
            coeffs,
        }
    }

    pub fn is_identity(&self) -> bool {
        self.coeffs.iter().enumerate().all(|(k, m)| {
            m.iter().enumerate().all(|(i, row)| {
                row.iter().enumerate().all(|(j, c)| {
                    if k == 0 && i == j {
                        c.is_one()
                    } else {
                        c.is_zero()
                    }
                })
            })
        })
    }

    /// True when every coefficient is a nonnegative integer.
    pub fn is_nonnegative_integral(&self) -> bool {
        self.coeffs
            .iter()
            .flatten()
            .flatten()
            .all(|c| c.is_integer() && !c.is_negative())
    }

    pub fn to_json(&self) -> Value {
        let n = self.size();
        let entries: Vec<Vec<Vec<String>>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| self.entry_coeffs(i, j).iter().map(|c| c.to_string()).collect())
                    .collect()
            })
            .collect();
        json!({ "labels": self.labels, "order": self.order, "coefficients": entries })
    }
}

impl fmt::Display for SeriesMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.size();
        for i in 0..n {
            for j in 0..n {
                let cs: Vec<String> = self.entry_coeffs(i, j).iter().map(|c| c.to_string()).collect();
                writeln!(f, "({}, {}): [{}]", self.labels[i], self.labels[j], cs.join(", "))?;
            }
        }
        Ok(())
    }
}

/// Inverts a polynomial matrix as a power series up to `t^order`, using
/// `S_0 = A_0^{-1}` and `S_k = -A_0^{-1} Σ_{i≥1} A_i S_{k-i}`.
pub fn invert_series(pm: &PolyMatrix, order: usize) -> Result<SeriesMatrix, SingularConstantTerm> {
    let n = pm.size();
    let a0_inv = invert_rational(&pm.coefficient(0)).ok_or(SingularConstantTerm)?;
    let top = pm.max_degree();
    let a: Vec<_> = (0..=top).map(|k| pm.coefficient(k)).collect();
    let mut s: Vec<Vec<Vec<BigRational>>> = vec![a0_inv.clone()];
    for k in 1..=order {
        let mut acc = vec![vec![BigRational::zero(); n]; n];
        for i in 1..=k.min(top) {
            add_product(&mut acc, &a[i], &s[k - i]);
        }
        let mut sk = vec![vec![BigRational::zero(); n]; n];
        add_product(&mut sk, &a0_inv, &acc);
        for row in &mut sk {
            for c in row.iter_mut() {
                *c = -c.clone();
            }
        }
        s.push(sk);
    }
    Ok(SeriesMatrix {
        labels: pm.labels().to_vec(),
        order,
        coeffs: s,
    })
}

/// Hilbert series of the quadratic dual predicted from `P(t)`: `P(-t)^{-T}`.
pub fn koszul_dual_series(pm: &PolyMatrix, order: usize) -> Result<SeriesMatrix, SingularConstantTerm> {
    invert_series(&pm.negate_variable().transpose(), order)
}

fn add_product(acc: &mut [Vec<BigRational>], x: &[Vec<BigRational>], y: &[Vec<BigRational>]) {
    let n = acc.len();
    for i in 0..n {
        for l in 0..n {
            if x[i][l].is_zero() {
                continue;
            }
            for j in 0..n {
                if !y[l][j].is_zero() {
                    acc[i][j] += &x[i][l] * &y[l][j];
                }
            }
        }
    }
}

fn invert_rational(m: &[Vec<BigRational>]) -> Option<Vec<Vec<BigRational>>> {
    let n = m.len();
    let mut aug: Vec<Vec<BigRational>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { BigRational::one() } else { BigRational::zero() }));
            r
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !aug[r][col].is_zero())?;
        aug.swap(col, pivot);
        let inv = aug[col][col].recip();
        for c in aug[col].iter_mut() {
            *c = &*c * &inv;
        }
        for r in 0..n {
            if r != col && !aug[r][col].is_zero() {
                let f = aug[r][col].clone();
                for c in 0..2 * n {
                    let sub = &f * &aug[col][c];
                    aug[r][c] -= sub;
                }
            }
        }
    }
    Some(aug.into_iter().map(|r| r[n..].to_vec()).collect())
}

/// Closed form whose `t^{2k+parity}` coefficient is a polynomial in `k` and
/// whose other-parity coefficients vanish.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClosedForm {
    pub parity: usize,
    /// Coefficients of the polynomial in `k`, lowest first.
    pub poly_in_k: Vec<BigRational>,
}

impl ClosedForm {
    /// Builds from integer numerators over a common denominator.
    pub fn new(parity: usize, numerators: &[i64], denominator: i64) -> Self {
        ClosedForm {
            parity: parity % 2,
            poly_in_k: numerators
                .iter()
                .map(|&c| BigRational::new(BigInt::from(c), BigInt::from(denominator)))
                .collect(),
        }
    }

    pub fn coefficient(&self, n: usize) -> BigRational {
        if n % 2 != self.parity {
            return BigRational::zero();
        }
        let k = BigRational::from_integer(BigInt::from((n - self.parity) / 2));
        self.poly_in_k
            .iter()
            .rev()
            .fold(BigRational::zero(), |acc, c| acc * &k + c)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mismatch {
    pub index: usize,
    pub expected: BigRational,
    pub computed: BigRational,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EntryComparison {
    pub row: usize,
    pub col: usize,
    pub first_mismatch: Option<Mismatch>,
}

impl EntryComparison {
    pub fn matches(&self) -> bool {
        self.first_mismatch.is_none()
    }
}

fn compare_coeffs(
    row: usize,
    col: usize,
    computed: &[BigRational],
    expected: impl Fn(usize) -> BigRational,
) -> EntryComparison {
    let first_mismatch = computed.iter().enumerate().find_map(|(k, c)| {
        let e = expected(k);
        (e != *c).then(|| Mismatch {
            index: k,
            expected: e,
            computed: c.clone(),
        })
    });
    EntryComparison {
        row,
        col,
        first_mismatch,
    }
}

/// Compares every entry against a closed form, up to the truncation order.
pub fn compare_closed_form(sm: &SeriesMatrix, forms: &[Vec<ClosedForm>]) -> Vec<EntryComparison> {
    let n = sm.size();
    let mut out = Vec::new();
    for i in 0..n {
        for j in 0..n {
            let form = &forms[i][j];
            out.push(compare_coeffs(i, j, &sm.entry_coeffs(i, j), |k| form.coefficient(k)));
        }
    }
    out
}

/// Checks `denominator · sm ≡ numerator` up to the truncation order.
pub fn compare_rational_form(
    sm: &SeriesMatrix,
    numerator: &PolyMatrix,
    denominator: &Poly,
) -> Vec<EntryComparison> {
    let n = sm.size();
    let mut out = Vec::new();
    for i in 0..n {
        for j in 0..n {
            let s = sm.entry_coeffs(i, j);
            let prod: Vec<BigRational> = (0..=sm.order())
                .map(|k| {
                    (0..=k)
                        .map(|a| BigRational::from_integer(denominator.coeff(a)) * &s[k - a])
                        .fold(BigRational::zero(), |x, y| x + y)
                })
                .collect();
            let num = numerator.entry(i, j);
            out.push(compare_coeffs(i, j, &prod, |k| {
                BigRational::from_integer(num.coeff(k))
            }));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn labels(n: usize) -> Vec<String> {
        (0..n).map(|i| format!("v{i}")).collect()
    }

    #[test]
    fn poly_display() {
        assert_eq!(Poly::from_i64s(vec![1, 0, -2, 0, 1]).to_string(), "1 - 2t^2 + t^4");
        assert_eq!(Poly::from_i64s(vec![0, 3]).to_string(), "3t");
        assert_eq!(Poly::zero().to_string(), "0");
    }

    #[test]
    fn det_identity_and_small() {
        assert_eq!(PolyMatrix::identity(labels(3)).det(), Poly::one());
        let m = PolyMatrix::from_i64s(labels(2), vec![vec![vec![1, 0, 1], vec![0, 2]], vec![vec![0, 2], vec![1, 0, 1]]]);
        // (1+t^2)^2 - 4t^2 = (1-t^2)^2
        assert_eq!(m.det(), Poly::from_i64s(vec![1, 0, -2, 0, 1]));
    }

    #[test]
    fn geometric_series() {
        let m = PolyMatrix::from_i64s(labels(1), vec![vec![vec![1, 1]]]);
        let s = koszul_dual_series(&m, 6).unwrap();
        assert!((0..=6).all(|k| s.coeff(0, 0, k).is_one()));
        let form = ClosedForm::new(0, &[1], 1);
        let all_ones = ClosedForm { parity: 0, poly_in_k: vec![BigRational::one()] };
        assert_eq!(form, all_ones);
    }

    #[test]
    fn inverse_times_matrix_is_identity() {
        let m = PolyMatrix::from_i64s(labels(2), vec![vec![vec![1, 0, 1], vec![0, 2]], vec![vec![0, 2], vec![1, 0, 1]]]);
        let s = invert_series(&m, 10).unwrap();
        assert!(s.left_mul_poly(&m).is_identity());
        assert_eq!(s.truncate(4), invert_series(&m, 4).unwrap());
    }

    #[test]
    fn singular_constant_term() {
        let m = PolyMatrix::from_i64s(labels(1), vec![vec![vec![0, 1]]]);
        assert_eq!(invert_series(&m, 3), Err(SingularConstantTerm));
    }

    #[test]
    fn closed_form_mismatch_reported() {
        let m = PolyMatrix::from_i64s(labels(1), vec![vec![vec![1, 0, -1]]]);
        let mut s = invert_series(&m, 8).unwrap();
        let forms = vec![vec![ClosedForm::new(0, &[1], 1)]];
        assert!(compare_closed_form(&s, &forms)[0].matches());
        s.set_coeff(0, 0, 6, BigRational::from_integer(2.into()));
        let c = &compare_closed_form(&s, &forms)[0];
        assert_eq!(c.first_mismatch.as_ref().unwrap().index, 6);
    }
}
