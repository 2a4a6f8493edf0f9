//! Finite-dimensional graded algebras `T_𝕜(V)/(R)` built degree by degree.
//!
//! Degree `n` is computed as the quotient of `Λ_{n-1} ⊗ V` by the image of
//! `Λ_{n-2} ⊗ R`, so every basis element is a monomial path and right
//! multiplication by an arrow is the stored reduction map.

use std::collections::{BTreeMap, HashMap};
use std::ops::Range;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::OnceLock;

use crate::error::AlgebraError;
use crate::linalg::{reduce_rows, DenseMatrix};
use crate::presentation::{Path, QuadraticPresentation, Weight};
use crate::scalar::{Field, Scalar};
use crate::series::{Poly, PolyMatrix};
use crate::sparse::SparseVec;

/// Default degree bound for builds.
pub const DEFAULT_MAX_DEGREE: usize = 8;

static NEXT_ID: AtomicU64 = AtomicU64::new(1);

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BasisElement {
    pub path: Path,
    pub degree: usize,
    pub weight: Weight,
}

impl BasisElement {
    pub fn source(&self) -> usize {
        self.path.source
    }

    pub fn target(&self) -> usize {
        self.path.target
    }
}

#[derive(Debug)]
pub struct GradedAlgebra {
    id: u64,
    presentation: QuadraticPresentation,
    max_degree: usize,
    vanished_at: Option<usize>,
    basis: Vec<BasisElement>,
    /// `degree_start[n]..degree_start[n+1]` are the basis indices of degree `n`.
    degree_start: Vec<usize>,
    /// `right_arrow[b][a]` = normal form of `basis[b]·arrow a`; empty when the
    /// product lies beyond the computed range of a non-vanished algebra.
    right_arrow: Vec<Vec<SparseVec>>,
    index_of_path: HashMap<Vec<usize>, usize>,
    mult_table: OnceLock<Vec<Vec<SparseVec>>>,
}

/// An element of a [`GradedAlgebra`], as coordinates on its stored basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlgebraElement {
    algebra_id: u64,
    coords: SparseVec,
}

impl AlgebraElement {
    pub fn coords(&self) -> &SparseVec {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.is_zero()
    }

    pub fn algebra_id(&self) -> u64 {
        self.algebra_id
    }

    fn same_parent(&self, other: &AlgebraElement) -> Result<(), AlgebraError> {
        if self.algebra_id != other.algebra_id {
            return Err(AlgebraError::ForeignElement);
        }
        Ok(())
    }

    pub fn add(&self, other: &AlgebraElement) -> Result<AlgebraElement, AlgebraError> {
        self.same_parent(other)?;
        let mut coords = self.coords.clone();
        for (i, s) in other.coords.iter() {
            coords.add_term(i, s);
        }
        Ok(AlgebraElement {
            algebra_id: self.algebra_id,
            coords,
        })
    }

    pub fn sub(&self, other: &AlgebraElement) -> Result<AlgebraElement, AlgebraError> {
        self.same_parent(other)?;
        let mut coords = self.coords.clone();
        for (i, s) in other.coords.iter() {
            coords.add_term(i, &-s);
        }
        Ok(AlgebraElement {
            algebra_id: self.algebra_id,
            coords,
        })
    }

    pub fn scale(&self, c: &Scalar) -> AlgebraElement {
        AlgebraElement {
            algebra_id: self.algebra_id,
            coords: self.coords.scaled(c),
        }
    }
}

impl GradedAlgebra {
    /// Builds degrees `0..=max_degree`, stopping at the first zero degree.
    pub fn build(
        presentation: &QuadraticPresentation,
        max_degree: usize,
    ) -> Result<GradedAlgebra, AlgebraError> {
        let p = presentation;
        let q = p.quiver();
        let field = p.field();
        let num_arrows = q.num_arrows();

        let mut basis: Vec<BasisElement> = Vec::new();
        let mut degree_start = vec![0];
        for v in 0..q.num_vertices() {
            basis.push(BasisElement {
                path: Path::trivial(v),
                degree: 0,
                weight: Weight::default(),
            });
        }
        degree_start.push(basis.len());
        let mut right_arrow: Vec<Vec<SparseVec>> = Vec::new();
        let mut vanished_at = if basis.is_empty() { Some(0) } else { None };

        if vanished_at.is_none() && max_degree >= 1 {
            let start1 = basis.len();
            for (a, arrow) in q.arrows().iter().enumerate() {
                basis.push(BasisElement {
                    path: q.path(&[a]).expect("single arrow"),
                    degree: 1,
                    weight: arrow.weight,
                });
            }
            degree_start.push(basis.len());
            // e_v · a is a when a ends at v.
            for v in 0..q.num_vertices() {
                right_arrow.push(
                    (0..num_arrows)
                        .map(|a| {
                            if q.arrow(a).target == v {
                                SparseVec::unit(start1 + a, field)
                            } else {
                                SparseVec::new()
                            }
                        })
                        .collect(),
                );
            }
            if num_arrows == 0 {
                vanished_at = Some(1);
            }
        }

        let relations: Vec<_> = p.relations().iter().map(|r| r.normalized()).collect();
        let mut n = 2;
        while vanished_at.is_none() && n <= max_degree {
            let prev = degree_start[n - 1]..degree_start[n];
            let prev2 = degree_start[n - 2]..degree_start[n - 1];
            // Candidate columns (b, a), grouped by block (source(a), target(b)).
            let mut blocks: BTreeMap<(usize, usize), Vec<(usize, usize)>> = BTreeMap::new();
            for b in prev.clone() {
                for a in 0..num_arrows {
                    if basis[b].source() == q.arrow(a).target {
                        blocks
                            .entry((q.arrow(a).source, basis[b].target()))
                            .or_default()
                            .push((b, a));
                    }
                }
            }
            // Rows: c·r for c in degree n-2 and r a relation starting where c ends.
            let mut rows_by_block: BTreeMap<(usize, usize), Vec<SparseColumnRow>> =
                BTreeMap::new();
            for c in prev2.clone() {
                for rel in &relations {
                    let Some(first) = rel.terms.first() else { continue };
                    let rel_source = q.arrow(first.path[1]).source;
                    let rel_target = q.arrow(first.path[0]).target;
                    if basis[c].source() != rel_target {
                        continue;
                    }
                    let mut row: SparseColumnRow = BTreeMap::new();
                    for t in &rel.terms {
                        let [x, y] = t.path;
                        for (b, coeff) in right_arrow[c][x].iter() {
                            let e = row.entry((b, y)).or_insert_with(|| field.zero());
                            *e += &(&t.coeff * coeff);
                        }
                    }
                    row.retain(|_, v| !v.is_zero());
                    if !row.is_empty() {
                        rows_by_block
                            .entry((rel_source, basis[c].target()))
                            .or_default()
                            .push(row);
                    }
                }
            }

            let start = basis.len();
            let mut new_elems: Vec<((usize, usize), BasisElement)> = Vec::new();
            // (b, a) -> reduction in terms of the block's surviving columns.
            let mut reductions: HashMap<(usize, usize), Vec<((usize, usize), Scalar)>> =
                HashMap::new();
            for (block, mut cols) in blocks {
                // Pivots land on lexicographically larger paths, so the
                // surviving standard monomials are the smaller ones.
                cols.sort_by(|x, y| path_key(&basis, *y).cmp(&path_key(&basis, *x)));
                let col_index: HashMap<(usize, usize), usize> =
                    cols.iter().enumerate().map(|(i, c)| (*c, i)).collect();
                let mut dense_rows: Vec<Vec<Scalar>> = rows_by_block
                    .remove(&block)
                    .unwrap_or_default()
                    .into_iter()
                    .map(|row| {
                        let mut d = vec![field.zero(); cols.len()];
                        for (k, v) in row {
                            d[col_index[&k]] = v;
                        }
                        d
                    })
                    .collect();
                let pivots = reduce_rows(&mut dense_rows, cols.len());
                let mut is_pivot = vec![None; cols.len()];
                for (r, &pc) in pivots.iter().enumerate() {
                    is_pivot[pc] = Some(r);
                }
                for (ci, &(b, a)) in cols.iter().enumerate() {
                    match is_pivot[ci] {
                        None => {
                            let mut path = basis[b].path.arrows.clone();
                            path.push(a);
                            new_elems.push((
                                (b, a),
                                BasisElement {
                                    path: q.path(&path).expect("composable"),
                                    degree: n,
                                    weight: basis[b].weight + q.arrow(a).weight,
                                },
                            ));
                        }
                        Some(r) => {
                            let terms = (0..cols.len())
                                .filter(|&k| is_pivot[k].is_none() && !dense_rows[r][k].is_zero())
                                .map(|k| (cols[k], -&dense_rows[r][k]))
                                .collect();
                            reductions.insert((b, a), terms);
                        }
                    }
                }
            }
            new_elems.sort_by(|x, y| x.1.path.arrows.cmp(&y.1.path.arrows));
            let mut column_to_basis: HashMap<(usize, usize), usize> = HashMap::new();
            for (i, (col, elem)) in new_elems.into_iter().enumerate() {
                column_to_basis.insert(col, start + i);
                basis.push(elem);
            }
            degree_start.push(basis.len());
            for b in prev {
                let row = (0..num_arrows)
                    .map(|a| {
                        if basis[b].source() != q.arrow(a).target {
                            return SparseVec::new();
                        }
                        if let Some(&idx) = column_to_basis.get(&(b, a)) {
                            return SparseVec::unit(idx, field);
                        }
                        reductions[&(b, a)]
                            .iter()
                            .map(|(col, c)| (column_to_basis[col], c.clone()))
                            .collect()
                    })
                    .collect();
                right_arrow.push(row);
            }
            if basis.len() == start {
                vanished_at = Some(n);
            }
            n += 1;
        }
        // In a vanished algebra the top nonzero degree multiplies to zero.
        if vanished_at.is_some() {
            while right_arrow.len() < basis.len() {
                right_arrow.push(vec![SparseVec::new(); num_arrows]);
            }
        }
        let index_of_path = basis
            .iter()
            .enumerate()
            .filter(|(_, b)| b.degree > 0)
            .map(|(i, b)| (b.path.arrows.clone(), i))
            .collect();
        Ok(GradedAlgebra {
            id: NEXT_ID.fetch_add(1, Ordering::Relaxed),
            presentation: presentation.clone(),
            max_degree,
            vanished_at,
            basis,
            degree_start,
            right_arrow,
            index_of_path,
            mult_table: OnceLock::new(),
        })
    }

    pub fn id(&self) -> u64 {
        self.id
    }

    pub fn presentation(&self) -> &QuadraticPresentation {
        &self.presentation
    }

    pub fn field(&self) -> Field {
        self.presentation.field()
    }

    pub fn max_degree(&self) -> usize {
        self.max_degree
    }

    /// First degree found to be zero, if the build reached one.
    pub fn vanished_at(&self) -> Option<usize> {
        self.vanished_at
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[BasisElement] {
        &self.basis
    }

    pub fn num_vertices(&self) -> usize {
        self.presentation.quiver().num_vertices()
    }

    pub fn num_arrows(&self) -> usize {
        self.presentation.quiver().num_arrows()
    }

    /// Highest degree whose basis has been computed.
    pub fn top_computed_degree(&self) -> usize {
        self.degree_start.len() - 2
    }

    pub fn degree_range(&self, n: usize) -> Range<usize> {
        if n + 1 >= self.degree_start.len() {
            let end = self.basis.len();
            return end..end;
        }
        self.degree_start[n]..self.degree_start[n + 1]
    }

    /// Dimensions of degrees `0..=top`, including the first zero degree when
    /// the build reached it.
    pub fn degree_dims(&self) -> Vec<usize> {
        (0..self.degree_start.len() - 1)
            .map(|n| self.degree_range(n).len())
            .collect()
    }

    /// Basis index of the idempotent of a vertex.
    pub fn idempotent_index(&self, v: usize) -> usize {
        v
    }

    /// Basis index of an arrow.
    pub fn arrow_index(&self, a: usize) -> usize {
        self.degree_start[1] + a
    }

    /// Basis indices with the given source, i.e. a basis of `Λe_source`.
    pub fn column_basis(&self, source: usize) -> Vec<usize> {
        (0..self.basis.len())
            .filter(|&i| self.basis[i].source() == source)
            .collect()
    }

    /// Basis indices of `e_target Λ_degree e_source`.
    pub fn block_basis(&self, source: usize, target: usize, degree: usize) -> Vec<usize> {
        self.degree_range(degree)
            .filter(|&i| self.basis[i].source() == source && self.basis[i].target() == target)
            .collect()
    }

    pub fn basis_index_of_path(&self, arrows: &[usize]) -> Option<usize> {
        self.index_of_path.get(arrows).copied()
    }

    fn check_vanished(&self) -> Result<usize, AlgebraError> {
        self.vanished_at
            .ok_or(AlgebraError::NotVanished(self.top_computed_degree()))
    }

    /// `basis[b] · arrow`.
    pub fn right_mul_arrow(&self, b: usize, arrow: usize) -> Result<&SparseVec, AlgebraError> {
        self.right_arrow
            .get(b)
            .map(|row| &row[arrow])
            .ok_or(AlgebraError::DegreeOutOfRange(self.basis[b].degree + 1))
    }

    /// Normal form of `v · (a_1 ⋯ a_k)`.
    pub fn right_mul_path(&self, v: &SparseVec, arrows: &[usize]) -> Result<SparseVec, AlgebraError> {
        let mut cur = v.clone();
        for &a in arrows {
            let mut next = SparseVec::new();
            for (b, c) in cur.iter() {
                next.add_scaled(self.right_mul_arrow(b, a)?, c);
            }
            cur = next;
        }
        Ok(cur)
    }

    fn mul_basis_uncached(&self, i: usize, j: usize) -> Result<SparseVec, AlgebraError> {
        let (x, y) = (&self.basis[i], &self.basis[j]);
        if x.source() != y.target() {
            return Ok(SparseVec::new());
        }
        if y.degree == 0 {
            return Ok(SparseVec::unit(i, self.field()));
        }
        if x.degree + y.degree > self.top_computed_degree() {
            match self.vanished_at {
                Some(_) => return Ok(SparseVec::new()),
                None => return Err(AlgebraError::DegreeOutOfRange(x.degree + y.degree)),
            }
        }
        self.right_mul_path(&SparseVec::unit(i, self.field()), &y.path.arrows)
    }

    /// Normal form of `basis[i] · basis[j]`; tabulated for vanished algebras.
    pub fn mul_basis(&self, i: usize, j: usize) -> Result<SparseVec, AlgebraError> {
        if self.vanished_at.is_some() {
            let table = self.mult_table.get_or_init(|| {
                (0..self.dim())
                    .map(|i| {
                        (0..self.dim())
                            .map(|j| self.mul_basis_uncached(i, j).expect("vanished algebra"))
                            .collect()
                    })
                    .collect()
            });
            return Ok(table[i][j].clone());
        }
        self.mul_basis_uncached(i, j)
    }

    /// Normal form of a sparse coordinate vector product.
    pub fn mul_coords(&self, a: &SparseVec, b: &SparseVec) -> Result<SparseVec, AlgebraError> {
        let mut out = SparseVec::new();
        for (i, x) in a.iter() {
            for (j, y) in b.iter() {
                let prod = self.mul_basis(i, j)?;
                out.add_scaled(&prod, &(x * y));
            }
        }
        Ok(out)
    }

    /// Normal form of an arbitrary composable path (or trivial path).
    pub fn normal_form(&self, path: &Path) -> Result<SparseVec, AlgebraError> {
        let Some((&first, rest)) = path.arrows.split_first() else {
            return Ok(SparseVec::unit(path.source, self.field()));
        };
        if path.arrows.len() > self.top_computed_degree() {
            return match self.vanished_at {
                Some(_) => Ok(SparseVec::new()),
                None => Err(AlgebraError::DegreeOutOfRange(path.arrows.len())),
            };
        }
        self.right_mul_path(&SparseVec::unit(self.arrow_index(first), self.field()), rest)
    }

    /// Matrix sending the free path space of length `n` (rows indexed by
    /// `enumerate_paths(n)`) to coordinates on the degree-`n` basis.
    pub fn projection_matrix(&self, n: usize) -> Result<DenseMatrix, AlgebraError> {
        let paths = self.presentation.quiver().enumerate_paths(n);
        let range = self.degree_range(n);
        let mut m = DenseMatrix::zeros(self.field(), paths.len(), range.len());
        for (r, p) in paths.iter().enumerate() {
            for (i, c) in self.normal_form(p)?.iter() {
                m.set(r, i - range.start, c.clone());
            }
        }
        Ok(m)
    }

    /// `entry(α, β)` has `t^i` coefficient `dim e_β Λ_i e_α`. Refuses to
    /// answer unless a zero degree was reached.
    pub fn hilbert_matrix(&self) -> Result<PolyMatrix, AlgebraError> {
        let top = self.check_vanished()?;
        let n = self.num_vertices();
        let mut counts = vec![vec![vec![0i64; top]; n]; n];
        for b in &self.basis {
            counts[b.source()][b.target()][b.degree] += 1;
        }
        let entries = counts
            .into_iter()
            .map(|row| row.into_iter().map(Poly::from_i64s).collect())
            .collect();
        Ok(PolyMatrix::new(
            self.presentation.quiver().vertices().to_vec(),
            entries,
        ))
    }

    /// Graded block dimensions `(degree, source, target) -> dim`.
    pub fn block_dims(&self) -> BTreeMap<(usize, usize, usize), usize> {
        let mut out = BTreeMap::new();
        for b in &self.basis {
            *out.entry((b.degree, b.source(), b.target())).or_insert(0) += 1;
        }
        out
    }

    // ---- elements ----

    pub fn element(&self, coords: SparseVec) -> AlgebraElement {
        AlgebraElement {
            algebra_id: self.id,
            coords,
        }
    }

    pub fn zero(&self) -> AlgebraElement {
        self.element(SparseVec::new())
    }

    pub fn one(&self) -> AlgebraElement {
        let f = self.field();
        self.element((0..self.num_vertices()).map(|v| (v, f.one())).collect())
    }

    pub fn basis_element(&self, i: usize) -> AlgebraElement {
        self.element(SparseVec::unit(i, self.field()))
    }

    pub fn idempotent(&self, vertex: &str) -> Result<AlgebraElement, AlgebraError> {
        let v = self
            .presentation
            .quiver()
            .vertex_by_name(vertex)
            .ok_or_else(|| AlgebraError::UnknownVertex(vertex.to_string()))?;
        Ok(self.basis_element(v))
    }

    pub fn arrow(&self, name: &str) -> Result<AlgebraElement, AlgebraError> {
        let a = self
            .presentation
            .quiver()
            .arrow_by_name(name)
            .ok_or_else(|| AlgebraError::UnknownArrow(name.to_string()))?;
        Ok(self.basis_element(self.arrow_index(a)))
    }

    /// Normal form of the product of the named arrows, in written order.
    pub fn path_element(&self, names: &[&str]) -> Result<AlgebraElement, AlgebraError> {
        let q = self.presentation.quiver();
        let arrows = names
            .iter()
            .map(|n| q.arrow_by_name(n).ok_or_else(|| AlgebraError::UnknownArrow(n.to_string())))
            .collect::<Result<Vec<_>, _>>()?;
        let path = q
            .path(&arrows)
            .ok_or_else(|| AlgebraError::NotComposable(names.join("·")))?;
        Ok(self.element(self.normal_form(&path)?))
    }

    /// Linear combination `Σ c_i · path_i` of named paths.
    pub fn combination(&self, terms: &[(i64, &[&str])]) -> Result<AlgebraElement, AlgebraError> {
        let mut acc = self.zero();
        for (c, names) in terms {
            let p = self.path_element(names)?;
            acc = acc.add(&p.scale(&self.field().from_i64(*c)))?;
        }
        Ok(acc)
    }

    fn own(&self, x: &AlgebraElement) -> Result<(), AlgebraError> {
        if x.algebra_id != self.id {
            return Err(AlgebraError::ForeignElement);
        }
        Ok(())
    }

    pub fn multiply(
        &self,
        a: &AlgebraElement,
        b: &AlgebraElement,
    ) -> Result<AlgebraElement, AlgebraError> {
        self.own(a)?;
        self.own(b)?;
        Ok(self.element(self.mul_coords(&a.coords, &b.coords)?))
    }

    pub fn commutator(
        &self,
        a: &AlgebraElement,
        b: &AlgebraElement,
    ) -> Result<AlgebraElement, AlgebraError> {
        self.multiply(a, b)?.sub(&self.multiply(b, a)?)
    }

    /// Human-readable rendering, e.g. `2·v·w - e_a`.
    pub fn format(&self, x: &AlgebraElement) -> String {
        if x.is_zero() {
            return "0".into();
        }
        let q = self.presentation.quiver();
        x.coords
            .iter()
            .map(|(i, c)| format!("({c})·{}", q.path_name(&self.basis[i].path)))
            .collect::<Vec<_>>()
            .join(" + ")
    }

    /// Degrees in which the element has nonzero coordinates.
    pub fn degrees_of(&self, x: &AlgebraElement) -> Vec<usize> {
        let mut d: Vec<usize> = x.coords.indices().map(|i| self.basis[i].degree).collect();
        d.sort_unstable();
        d.dedup();
        d
    }
}

type SparseColumnRow = BTreeMap<(usize, usize), Scalar>;

fn path_key(basis: &[BasisElement], (b, a): (usize, usize)) -> Vec<usize> {
    let mut p = basis[b].path.arrows.clone();
    p.push(a);
    p
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presentation::{Quiver, Relation};

    fn dual_numbers(field: Field) -> QuadraticPresentation {
        let q = Quiver::new(
            vec!["o".into()],
            vec![("x".into(), "o".into(), "o".into(), Weight(1, 0))],
        )
        .unwrap();
        let r = Relation::from_names(&q, field, &[(1, "x", "x")]).unwrap();
        QuadraticPresentation::new(q, vec![r], field).unwrap()
    }

    #[test]
    fn dual_numbers_dims() {
        let a = GradedAlgebra::build(&dual_numbers(Field::Rationals), 8).unwrap();
        assert_eq!(a.degree_dims(), vec![1, 1, 0]);
        assert_eq!(a.vanished_at(), Some(2));
        let h = a.hilbert_matrix().unwrap();
        assert_eq!(h.entry(0, 0), &Poly::from_i64s(vec![1, 1]));
    }

    #[test]
    fn polynomial_ring_is_not_certified() {
        let q = Quiver::new(
            vec!["o".into()],
            vec![("x".into(), "o".into(), "o".into(), Weight(1, 0))],
        )
        .unwrap();
        let p = QuadraticPresentation::new(q, vec![], Field::Rationals).unwrap();
        let a = GradedAlgebra::build(&p, 4).unwrap();
        assert_eq!(a.degree_dims(), vec![1, 1, 1, 1, 1]);
        assert!(matches!(a.hilbert_matrix(), Err(AlgebraError::NotVanished(4))));
        let x = a.arrow("x").unwrap();
        let x2 = a.multiply(&x, &x).unwrap();
        let x4 = a.multiply(&x2, &x2).unwrap();
        assert!(!x4.is_zero());
        assert!(matches!(a.multiply(&x4, &x), Err(AlgebraError::DegreeOutOfRange(5))));
    }

    #[test]
    fn foreign_elements_rejected() {
        let a = GradedAlgebra::build(&dual_numbers(Field::Rationals), 8).unwrap();
        let b = GradedAlgebra::build(&dual_numbers(Field::Rationals), 8).unwrap();
        assert_eq!(
            a.multiply(&a.one(), &b.one()),
            Err(AlgebraError::ForeignElement)
        );
    }

    #[test]
    fn one_is_identity() {
        let a = GradedAlgebra::build(&dual_numbers(Field::Prime(5)), 8).unwrap();
        let x = a.arrow("x").unwrap();
        assert_eq!(a.multiply(&a.one(), &x).unwrap(), x);
        assert_eq!(a.multiply(&x, &a.one()).unwrap(), x);
        assert!(a.multiply(&x, &x).unwrap().is_zero());
    }
}
