//! Centre, degree-zero derivations, and the degree-zero part of HH¹.

use std::collections::BTreeMap;

use crate::algebra::{AlgebraElement, GradedAlgebra};
use crate::error::AlgebraError;
use crate::linalg::{DenseMatrix, EchelonBasis};
use crate::scalar::{Field, Scalar};
use crate::sparse::SparseVec;

#[derive(Clone, Debug)]
pub struct CentreBasis {
    pub elements: Vec<AlgebraElement>,
    /// Internal degree -> dimension of the centre in that degree.
    pub graded_dims: BTreeMap<usize, usize>,
}

impl CentreBasis {
    pub fn dim(&self) -> usize {
        self.elements.len()
    }
}

/// Generators of the algebra as basis indices: idempotents, then arrows.
fn generator_indices(alg: &GradedAlgebra) -> Vec<usize> {
    (0..alg.num_vertices())
        .map(|v| alg.idempotent_index(v))
        .chain((0..alg.num_arrows()).map(|a| alg.arrow_index(a)))
        .collect()
}

fn commutator_column(alg: &GradedAlgebra, b: usize, gens: &[usize]) -> Result<Vec<Scalar>, AlgebraError> {
    let field = alg.field();
    let mut col = Vec::with_capacity(gens.len() * alg.dim());
    for &g in gens {
        let mut c = alg.mul_basis(b, g)?;
        c.add_scaled(&alg.mul_basis(g, b)?, &field.from_i64(-1));
        col.extend(c.to_dense(alg.dim(), field));
    }
    Ok(col)
}

/// Solves `z·g = g·z` for every idempotent and arrow `g`, degree by degree.
pub fn centre(alg: &GradedAlgebra) -> Result<CentreBasis, AlgebraError> {
    let field = alg.field();
    let gens = generator_indices(alg);
    let mut elements = Vec::new();
    let mut graded_dims = BTreeMap::new();
    for n in 0..alg.degree_dims().len() {
        let range = alg.degree_range(n);
        if range.is_empty() {
            continue;
        }
        let columns = range
            .clone()
            .map(|b| commutator_column(alg, b, &gens))
            .collect::<Result<Vec<_>, _>>()?;
        let m = DenseMatrix::from_rows(field, columns[0].len(), columns)
            .expect("field")
            .transpose();
        let kernel = m.kernel_basis().expect("field");
        if kernel.rows() > 0 {
            graded_dims.insert(n, kernel.rows());
        }
        for k in 0..kernel.rows() {
            let coords: SparseVec = kernel
                .row(k)
                .iter()
                .enumerate()
                .filter(|(_, s)| !s.is_zero())
                .map(|(i, s)| (range.start + i, s.clone()))
                .collect();
            elements.push(alg.element(coords));
        }
    }
    Ok(CentreBasis {
        elements,
        graded_dims,
    })
}

pub fn is_central(alg: &GradedAlgebra, x: &AlgebraElement) -> Result<bool, AlgebraError> {
    for g in generator_indices(alg) {
        let g = alg.basis_element(g);
        if !alg.commutator(x, &g)?.is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Basis of the left socle of `Λe_vertex`: elements killed by every arrow
/// acting on the left.
pub fn projective_socle(alg: &GradedAlgebra, vertex: usize) -> Result<Vec<AlgebraElement>, AlgebraError> {
    let field = alg.field();
    let column = alg.column_basis(vertex);
    let columns = column
        .iter()
        .map(|&b| {
            let mut col = Vec::new();
            for a in 0..alg.num_arrows() {
                col.extend(alg.mul_basis(alg.arrow_index(a), b)?.to_dense(alg.dim(), field));
            }
            Ok(col)
        })
        .collect::<Result<Vec<_>, AlgebraError>>()?;
    let m = DenseMatrix::from_rows(field, columns[0].len(), columns)
        .expect("field")
        .transpose();
    let kernel = m.kernel_basis().expect("field");
    Ok((0..kernel.rows())
        .map(|k| {
            alg.element(
                kernel
                    .row(k)
                    .iter()
                    .enumerate()
                    .filter(|(_, s)| !s.is_zero())
                    .map(|(i, s)| (column[i], s.clone()))
                    .collect(),
            )
        })
        .collect())
}

/// Degree-preserving derivation, stored by its action on `Λ₀` and `Λ₁`.
/// Column `c` of `d0` (`d1`) is the image of idempotent (arrow) `c`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Derivation {
    pub d0: DenseMatrix,
    pub d1: DenseMatrix,
}

impl Derivation {
    pub fn zero(alg: &GradedAlgebra) -> Self {
        let (n0, n1, f) = (alg.num_vertices(), alg.num_arrows(), alg.field());
        Derivation {
            d0: DenseMatrix::zeros(f, n0, n0),
            d1: DenseMatrix::zeros(f, n1, n1),
        }
    }

    pub fn from_arrow_matrix(alg: &GradedAlgebra, d1: DenseMatrix) -> Self {
        Derivation {
            d1,
            ..Derivation::zero(alg)
        }
    }

    fn field(&self) -> Field {
        self.d0.field()
    }

    pub fn to_vector(&self) -> Vec<Scalar> {
        self.d0
            .row_vecs()
            .into_iter()
            .flatten()
            .chain(self.d1.row_vecs().into_iter().flatten())
            .collect()
    }

    pub fn from_vector(field: Field, n0: usize, n1: usize, v: &[Scalar]) -> Self {
        let (a, b) = v.split_at(n0 * n0);
        let rows = |s: &[Scalar], n: usize| s.chunks(n.max(1)).map(|c| c.to_vec()).collect::<Vec<_>>();
        Derivation {
            d0: DenseMatrix::from_rows(field, n0, if n0 == 0 { vec![] } else { rows(a, n0) }).expect("field"),
            d1: DenseMatrix::from_rows(field, n1, if n1 == 0 { vec![] } else { rows(b, n1) }).expect("field"),
        }
    }

    pub fn bracket(&self, other: &Derivation) -> Derivation {
        Derivation {
            d0: self.d0.commutator(&other.d0).expect("shape"),
            d1: self.d1.commutator(&other.d1).expect("shape"),
        }
    }

    pub fn add(&self, other: &Derivation) -> Derivation {
        Derivation {
            d0: self.d0.add(&other.d0).expect("shape"),
            d1: self.d1.add(&other.d1).expect("shape"),
        }
    }

    pub fn scale(&self, c: &Scalar) -> Derivation {
        Derivation {
            d0: self.d0.scale(c),
            d1: self.d1.scale(c),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.d0.is_zero() && self.d1.is_zero()
    }

    /// Images of every basis element of `alg`, extending by Leibniz along
    /// the monomial path of each basis element.
    pub fn extend(&self, alg: &GradedAlgebra) -> Result<Vec<SparseVec>, AlgebraError> {
        let q = alg.presentation().quiver();
        let mut out = Vec::with_capacity(alg.dim());
        for b in alg.basis() {
            let arrows = &b.path.arrows;
            if arrows.is_empty() {
                out.push(SparseVec::from_dense(&self.d0.column(b.source())));
                continue;
            }
            let mut img = SparseVec::new();
            for pos in 0..arrows.len() {
                for r in 0..self.d1.rows() {
                    let c = self.d1.get(r, arrows[pos]);
                    if c.is_zero() {
                        continue;
                    }
                    let mut replaced = arrows.clone();
                    replaced[pos] = r;
                    if let Some(path) = q.path(&replaced) {
                        img.add_scaled(&alg.normal_form(&path)?, c);
                    }
                }
            }
            out.push(img);
        }
        Ok(out)
    }

    /// Linear constraints whose vanishing is the derivation property.
    pub fn constraint_vector(&self, alg: &GradedAlgebra) -> Result<Vec<Scalar>, AlgebraError> {
        let field = self.field();
        let q = alg.presentation().quiver();
        let (n0, n1) = (alg.num_vertices(), alg.num_arrows());
        let mut out = Vec::new();
        let d0 = |r: usize, c: usize| self.d0.get(r, c).clone();
        let d1 = |r: usize, c: usize| self.d1.get(r, c).clone();
        // e_i e_j = δ_ij e_i
        for i in 0..n0 {
            for j in 0..n0 {
                let mut v = vec![field.zero(); n0];
                if i == j {
                    for (r, e) in v.iter_mut().enumerate() {
                        *e += &d0(r, i);
                    }
                }
                v[j] -= &d0(j, i);
                v[i] -= &d0(i, j);
                out.extend(v);
            }
        }
        // e_v·a and a·e_v
        for v in 0..n0 {
            for a in 0..n1 {
                let (s, t) = (q.arrow(a).source, q.arrow(a).target);
                let mut left = vec![field.zero(); n1];
                let mut right = vec![field.zero(); n1];
                for r in 0..n1 {
                    if v == t {
                        left[r] += &d1(r, a);
                    }
                    if q.arrow(r).target == v {
                        left[r] -= &d1(r, a);
                    }
                    if v == s {
                        right[r] += &d1(r, a);
                    }
                    if q.arrow(r).source == v {
                        right[r] -= &d1(r, a);
                    }
                }
                left[a] -= &d0(t, v);
                right[a] -= &d0(s, v);
                out.extend(left);
                out.extend(right);
            }
        }
        // δ(r) = 0 in Λ₂ for each relation
        let deg2 = alg.degree_range(2);
        for rel in alg.presentation().relations() {
            let mut img = SparseVec::new();
            for t in &rel.terms {
                let [x, y] = t.path;
                for r in 0..n1 {
                    let cx = d1(r, x);
                    if !cx.is_zero() {
                        if let Some(p) = q.path(&[r, y]) {
                            img.add_scaled(&alg.normal_form(&p)?, &(&t.coeff * &cx));
                        }
                    }
                    let cy = d1(r, y);
                    if !cy.is_zero() {
                        if let Some(p) = q.path(&[x, r]) {
                            img.add_scaled(&alg.normal_form(&p)?, &(&t.coeff * &cy));
                        }
                    }
                }
            }
            let mut dense = vec![field.zero(); deg2.len()];
            for (i, c) in img.iter() {
                dense[i - deg2.start] = c.clone();
            }
            out.extend(dense);
        }
        Ok(out)
    }

    pub fn is_derivation(&self, alg: &GradedAlgebra) -> Result<bool, AlgebraError> {
        Ok(self.constraint_vector(alg)?.iter().all(Scalar::is_zero))
    }
}

/// Number of basis pairs `(x, y)` with `D(xy) ≠ D(x)y + xD(y)`.
pub fn leibniz_defects(alg: &GradedAlgebra, images: &[SparseVec]) -> Result<usize, AlgebraError> {
    let field = alg.field();
    let mut bad = 0;
    for i in 0..alg.dim() {
        for j in 0..alg.dim() {
            let prod = alg.mul_basis(i, j)?;
            let mut lhs = SparseVec::new();
            for (k, c) in prod.iter() {
                lhs.add_scaled(&images[k], c);
            }
            let unit_i = SparseVec::unit(i, field);
            let unit_j = SparseVec::unit(j, field);
            let mut rhs = alg.mul_coords(&images[i], &unit_j)?;
            rhs.add_scaled(&alg.mul_coords(&unit_i, &images[j])?, &field.one());
            if lhs != rhs {
                bad += 1;
            }
        }
    }
    Ok(bad)
}

#[derive(Clone, Debug)]
pub struct DerivationSpace {
    pub basis: Vec<Derivation>,
}

impl DerivationSpace {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }
}

fn unknown_count(alg: &GradedAlgebra) -> (usize, usize) {
    (alg.num_vertices(), alg.num_arrows())
}

/// All derivations preserving the internal grading, found as the kernel of
/// the constraint system on `Λ₀ ⊕ Λ₁`.
pub fn derivations_degree0(alg: &GradedAlgebra) -> Result<DerivationSpace, AlgebraError> {
    let field = alg.field();
    let (n0, n1) = unknown_count(alg);
    let total = n0 * n0 + n1 * n1;
    let mut columns = Vec::with_capacity(total);
    for k in 0..total {
        let mut v = vec![field.zero(); total];
        v[k] = field.one();
        columns.push(Derivation::from_vector(field, n0, n1, &v).constraint_vector(alg)?);
    }
    let rows = columns.first().map_or(0, Vec::len);
    let m = DenseMatrix::from_rows(field, rows, columns).expect("field").transpose();
    let kernel = m.kernel_basis().expect("field");
    Ok(DerivationSpace {
        basis: (0..kernel.rows())
            .map(|k| Derivation::from_vector(field, n0, n1, kernel.row(k)))
            .collect(),
    })
}

/// `ad(x)(y) = xy - yx` for `x ∈ Λ₀`, restricted to generators.
pub fn inner_derivation(alg: &GradedAlgebra, x: &[Scalar]) -> Derivation {
    let q = alg.presentation().quiver();
    let mut d = Derivation::zero(alg);
    for a in 0..alg.num_arrows() {
        let (s, t) = (q.arrow(a).source, q.arrow(a).target);
        d.d1.set(a, a, &x[t] - &x[s]);
    }
    d
}

/// Span of `ad(e_v)` over all vertices, reduced to a basis.
pub fn inner_derivations_degree0(alg: &GradedAlgebra) -> DerivationSpace {
    let field = alg.field();
    let (n0, n1) = unknown_count(alg);
    let mut ech = EchelonBasis::new(field, n0 * n0 + n1 * n1);
    let mut basis = Vec::new();
    for v in 0..n0 {
        let mut e = vec![field.zero(); n0];
        e[v] = field.one();
        let d = inner_derivation(alg, &e);
        if ech.insert(d.to_vector()) {
            basis.push(d);
        }
    }
    DerivationSpace { basis }
}

/// `Δ(l) = n·l` for `l ∈ Λ_n`.
pub fn grading_derivation(alg: &GradedAlgebra) -> Derivation {
    let f = alg.field();
    Derivation::from_arrow_matrix(alg, DenseMatrix::identity(f, alg.num_arrows()))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LieSignature {
    pub dim: usize,
    pub derived_dim: usize,
    pub centre_dim: usize,
}

/// Degree-zero derivations modulo inner ones, with the induced bracket.
#[derive(Clone, Debug)]
pub struct LieQuotient {
    field: Field,
    n0: usize,
    n1: usize,
    pub derivations: DerivationSpace,
    pub inner: DerivationSpace,
    /// Representatives of a basis of the quotient.
    pub representatives: Vec<Derivation>,
    /// `structure[i][j]` = coordinates of `[rep_i, rep_j]` modulo inner.
    pub structure: Vec<Vec<Vec<Scalar>>>,
    pub signature: LieSignature,
}

impl LieQuotient {
    pub fn dim(&self) -> usize {
        self.representatives.len()
    }

    /// Quotient coordinates of a derivation, `None` if it is not in the span
    /// of derivations.
    pub fn coordinates(&self, d: &Derivation) -> Option<Vec<Scalar>> {
        let cols: Vec<Vec<Scalar>> = self
            .inner
            .basis
            .iter()
            .chain(&self.representatives)
            .map(Derivation::to_vector)
            .collect();
        let len = self.n0 * self.n0 + self.n1 * self.n1;
        if cols.is_empty() {
            return d.is_zero().then(Vec::new);
        }
        let m = DenseMatrix::from_rows(self.field, len, cols).expect("field").transpose();
        let rhs = DenseMatrix::from_rows(self.field, 1, d.to_vector().into_iter().map(|s| vec![s]).collect())
            .expect("field");
        let x = m.solve(&rhs).expect("shape")?;
        let skip = self.inner.dim();
        Some((skip..skip + self.dim()).map(|i| x.get(i, 0).clone()).collect())
    }

    /// Dimension of the image in the quotient of the span of `ds`.
    pub fn span_rank(&self, ds: &[Derivation]) -> Option<usize> {
        let rows = ds
            .iter()
            .map(|d| self.coordinates(d))
            .collect::<Option<Vec<_>>>()?;
        if rows.is_empty() || self.dim() == 0 {
            return Some(0);
        }
        Some(DenseMatrix::from_rows(self.field, self.dim(), rows).expect("field").rank())
    }
}

pub fn hh1_degree0(alg: &GradedAlgebra) -> Result<LieQuotient, AlgebraError> {
    let field = alg.field();
    let (n0, n1) = unknown_count(alg);
    let derivations = derivations_degree0(alg)?;
    let inner = inner_derivations_degree0(alg);
    let mut ech = EchelonBasis::new(field, n0 * n0 + n1 * n1);
    for d in &inner.basis {
        ech.insert(d.to_vector());
    }
    let representatives: Vec<Derivation> = derivations
        .basis
        .iter()
        .filter(|d| ech.insert(d.to_vector()))
        .cloned()
        .collect();
    let mut quotient = LieQuotient {
        field,
        n0,
        n1,
        derivations,
        inner,
        representatives,
        structure: Vec::new(),
        signature: LieSignature {
            dim: 0,
            derived_dim: 0,
            centre_dim: 0,
        },
    };
    let q = quotient.dim();
    let mut structure = vec![vec![Vec::new(); q]; q];
    for i in 0..q {
        for j in 0..q {
            let br = quotient.representatives[i].bracket(&quotient.representatives[j]);
            structure[i][j] = quotient
                .coordinates(&br)
                .expect("bracket of derivations is a derivation");
        }
    }
    let derived_dim = if q == 0 {
        0
    } else {
        DenseMatrix::from_rows(field, q, structure.iter().flatten().cloned().collect())
            .expect("field")
            .rank()
    };
    // x is central iff Σ_i x_i structure[i][j][k] = 0 for all j, k.
    let centre_dim = if q == 0 {
        0
    } else {
        let mut rows = Vec::new();
        for j in 0..q {
            for k in 0..q {
                rows.push((0..q).map(|i| structure[i][j][k].clone()).collect());
            }
        }
        DenseMatrix::from_rows(field, q, rows).expect("field").kernel_basis().expect("field").rows()
    };
    quotient.structure = structure;
    quotient.signature = LieSignature {
        dim: q,
        derived_dim,
        centre_dim,
    };
    Ok(quotient)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presets::{DualNumbers, Preset};

    #[test]
    fn dual_numbers_invariants() {
        let p = DualNumbers.presentation(Field::Rationals).unwrap();
        let a = GradedAlgebra::build(&p, 4).unwrap();
        let z = centre(&a).unwrap();
        assert_eq!(z.dim(), 2);
        assert_eq!(derivations_degree0(&a).unwrap().dim(), 1);
        assert_eq!(inner_derivations_degree0(&a).dim(), 0);
        let h = hh1_degree0(&a).unwrap();
        assert_eq!(
            h.signature,
            LieSignature {
                dim: 1,
                derived_dim: 0,
                centre_dim: 1
            }
        );
        assert!(grading_derivation(&a).is_derivation(&a).unwrap());
    }
}
