//! Quivers, quadratic relations, and operations on presentations.
//!
//! Composition convention: a word written `x·y` means "apply `y`, then `x`",
//! so it is composable iff `source(x) == target(y)`. An arrow from `s` to `t`
//! lies in `e_t V e_s`, and a path from `s` to `t` lies in `e_t Λ e_s`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::PresentationError;
use crate::linalg::DenseMatrix;
use crate::scalar::{Field, Scalar};

/// Position in the weight lattice `Z²`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Weight(pub i64, pub i64);

impl Add for Weight {
    type Output = Weight;
    fn add(self, rhs: Weight) -> Weight {
        Weight(self.0 + rhs.0, self.1 + rhs.1)
    }
}

impl Sub for Weight {
    type Output = Weight;
    fn sub(self, rhs: Weight) -> Weight {
        Weight(self.0 - rhs.0, self.1 - rhs.1)
    }
}

impl Neg for Weight {
    type Output = Weight;
    fn neg(self) -> Weight {
        Weight(-self.0, -self.1)
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.0, self.1)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Arrow {
    pub name: String,
    pub source: usize,
    pub target: usize,
    pub weight: Weight,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Quiver {
    vertices: Vec<String>,
    arrows: Vec<Arrow>,
    arrow_index: HashMap<String, usize>,
}

/// A path of arrows in written order, together with its endpoints so that
/// trivial paths (vertex idempotents) are representable.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Path {
    pub source: usize,
    pub target: usize,
    pub arrows: Vec<usize>,
}

impl Path {
    pub fn trivial(vertex: usize) -> Self {
        Path {
            source: vertex,
            target: vertex,
            arrows: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.arrows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.arrows.is_empty()
    }
}

impl Quiver {
    /// `arrows` are `(name, source, target, weight)` with vertex names.
    pub fn new(
        vertices: Vec<String>,
        arrows: Vec<(String, String, String, Weight)>,
    ) -> Result<Self, PresentationError> {
        let mut vindex = HashMap::new();
        for (i, v) in vertices.iter().enumerate() {
            if vindex.insert(v.clone(), i).is_some() {
                return Err(PresentationError::DuplicateVertex(v.clone()));
            }
        }
        let mut out = Vec::with_capacity(arrows.len());
        let mut arrow_index = HashMap::new();
        for (name, s, t, weight) in arrows {
            let lookup = |v: &String| {
                vindex
                    .get(v)
                    .copied()
                    .ok_or_else(|| PresentationError::UnknownVertex {
                        arrow: name.clone(),
                        vertex: v.clone(),
                    })
            };
            let source = lookup(&s)?;
            let target = lookup(&t)?;
            if arrow_index.insert(name.clone(), out.len()).is_some() {
                return Err(PresentationError::DuplicateArrow(name));
            }
            out.push(Arrow {
                name,
                source,
                target,
                weight,
            });
        }
        Ok(Quiver {
            vertices,
            arrows: out,
            arrow_index,
        })
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn arrows(&self) -> &[Arrow] {
        &self.arrows
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn num_arrows(&self) -> usize {
        self.arrows.len()
    }

    pub fn arrow(&self, i: usize) -> &Arrow {
        &self.arrows[i]
    }

    pub fn arrow_by_name(&self, name: &str) -> Option<usize> {
        self.arrow_index.get(name).copied()
    }

    pub fn vertex_by_name(&self, name: &str) -> Option<usize> {
        self.vertices.iter().position(|v| v == name)
    }

    /// `x·y` is composable iff `y` ends where `x` starts.
    pub fn composable(&self, x: usize, y: usize) -> bool {
        self.arrows[x].source == self.arrows[y].target
    }

    pub fn path_weight(&self, arrows: &[usize]) -> Weight {
        arrows
            .iter()
            .fold(Weight::default(), |w, &a| w + self.arrows[a].weight)
    }

    pub fn path_name(&self, path: &Path) -> String {
        if path.arrows.is_empty() {
            format!("e_{}", self.vertices[path.source])
        } else {
            path.arrows
                .iter()
                .map(|&a| self.arrows[a].name.as_str())
                .collect::<Vec<_>>()
                .join("·")
        }
    }

    /// Path from a written word; validates composability.
    pub fn path(&self, arrows: &[usize]) -> Option<Path> {
        let (&first, &last) = (arrows.first()?, arrows.last()?);
        if arrows.windows(2).any(|w| !self.composable(w[0], w[1])) {
            return None;
        }
        Some(Path {
            source: self.arrows[last].source,
            target: self.arrows[first].target,
            arrows: arrows.to_vec(),
        })
    }

    /// All composable words of `n` arrows, lexicographic in arrow indices.
    /// For `n = 0` the trivial paths, one per vertex.
    pub fn enumerate_paths(&self, n: usize) -> Vec<Path> {
        if n == 0 {
            return (0..self.num_vertices()).map(Path::trivial).collect();
        }
        let mut words: Vec<Vec<usize>> = (0..self.num_arrows()).map(|a| vec![a]).collect();
        for _ in 1..n {
            let mut next = Vec::new();
            for w in &words {
                let last = *w.last().unwrap();
                for a in 0..self.num_arrows() {
                    if self.composable(last, a) {
                        let mut nw = w.clone();
                        nw.push(a);
                        next.push(nw);
                    }
                }
            }
            words = next;
        }
        words
            .into_iter()
            .map(|w| self.path(&w).expect("composable by construction"))
            .collect()
    }

    /// Same vertices, every arrow reversed (names and weights kept).
    pub fn opposite(&self) -> Quiver {
        let arrows = self
            .arrows
            .iter()
            .map(|a| Arrow {
                name: a.name.clone(),
                source: a.target,
                target: a.source,
                weight: a.weight,
            })
            .collect();
        Quiver {
            vertices: self.vertices.clone(),
            arrows,
            arrow_index: self.arrow_index.clone(),
        }
    }
}

/// Names the dual generator: appends `*`, or strips a trailing one, so the
/// operation is an involution.
pub fn dual_arrow_name(name: &str) -> String {
    match name.strip_suffix('*') {
        Some(base) => base.to_string(),
        None => format!("{name}*"),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Term {
    pub coeff: Scalar,
    /// `[x, y]` for the product `x·y`.
    pub path: [usize; 2],
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Relation {
    pub terms: Vec<Term>,
}

impl Relation {
    pub fn new(terms: Vec<Term>) -> Self {
        Relation { terms }
    }

    /// Builds a relation from `(coefficient, first arrow, second arrow)` names.
    pub fn from_names(
        quiver: &Quiver,
        field: Field,
        terms: &[(i64, &str, &str)],
    ) -> Result<Self, PresentationError> {
        let mut out = Vec::new();
        for &(c, x, y) in terms {
            let find = |n: &str| {
                quiver
                    .arrow_by_name(n)
                    .ok_or_else(|| PresentationError::UnknownArrow {
                        relation: 0,
                        arrow: n.to_string(),
                    })
            };
            out.push(Term {
                coeff: field.from_i64(c),
                path: [find(x)?, find(y)?],
            });
        }
        Ok(Relation { terms: out })
    }

    /// Merges repeated paths and drops zero terms; terms sorted by path.
    pub fn normalized(&self) -> Relation {
        let mut acc: BTreeMap<[usize; 2], Scalar> = BTreeMap::new();
        for t in &self.terms {
            match acc.get_mut(&t.path) {
                Some(c) => *c += &t.coeff,
                None => {
                    acc.insert(t.path, t.coeff.clone());
                }
            }
        }
        Relation {
            terms: acc
                .into_iter()
                .filter(|(_, c)| !c.is_zero())
                .map(|(path, coeff)| Term { coeff, path })
                .collect(),
        }
    }

    pub fn display(&self, quiver: &Quiver) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        self.terms
            .iter()
            .map(|t| {
                format!(
                    "({})·{}·{}",
                    t.coeff,
                    quiver.arrow(t.path[0]).name,
                    quiver.arrow(t.path[1]).name
                )
            })
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

/// Outcome of [`QuadraticPresentation::is_weight_homogeneous`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomogeneityReport {
    pub homogeneous: bool,
    /// Indices of offending relations with the weights their terms carry.
    pub violations: Vec<(usize, Vec<Weight>)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadraticPresentation {
    quiver: Quiver,
    relations: Vec<Relation>,
    field: Field,
}

impl QuadraticPresentation {
    /// Validates composability, common endpoints and coefficient fields.
    pub fn new(
        quiver: Quiver,
        relations: Vec<Relation>,
        field: Field,
    ) -> Result<Self, PresentationError> {
        for (ri, rel) in relations.iter().enumerate() {
            let mut ends = None;
            for t in &rel.terms {
                if t.coeff.field() != field {
                    return Err(PresentationError::FieldMismatch {
                        relation: ri,
                        expected: field,
                        found: t.coeff.field(),
                    });
                }
                let [x, y] = t.path;
                for a in [x, y] {
                    if a >= quiver.num_arrows() {
                        return Err(PresentationError::UnknownArrow {
                            relation: ri,
                            arrow: format!("#{a}"),
                        });
                    }
                }
                if !quiver.composable(x, y) {
                    return Err(PresentationError::NotComposable {
                        relation: ri,
                        first: quiver.arrow(x).name.clone(),
                        second: quiver.arrow(y).name.clone(),
                    });
                }
                let e = (quiver.arrow(y).source, quiver.arrow(x).target);
                match ends {
                    None => ends = Some(e),
                    Some(prev) if prev != e => {
                        return Err(PresentationError::MixedEndpoints { relation: ri })
                    }
                    _ => {}
                }
            }
        }
        Ok(QuadraticPresentation {
            quiver,
            relations,
            field,
        })
    }

    pub fn quiver(&self) -> &Quiver {
        &self.quiver
    }

    pub fn relations(&self) -> &[Relation] {
        &self.relations
    }

    pub fn field(&self) -> Field {
        self.field
    }

    /// The same presentation with coefficients reinterpreted in `field`.
    /// Only meaningful for presentations whose coefficients are integers.
    pub fn with_field(&self, field: Field) -> Result<Self, PresentationError> {
        if field == self.field {
            return Ok(self.clone());
        }
        let relations = self
            .relations
            .iter()
            .enumerate()
            .map(|(ri, r)| {
                let terms = r
                    .terms
                    .iter()
                    .map(|t| {
                        let q = match &t.coeff {
                            Scalar::Rational(q) => q.clone(),
                            other => crate::scalar::parse_rational(&other.to_string())?,
                        };
                        Ok(Term {
                            coeff: field.from_rational(&q)?,
                            path: t.path,
                        })
                    })
                    .collect::<Result<Vec<_>, crate::error::ScalarError>>()
                    .map_err(|e| PresentationError::BadRelation {
                        relation: ri,
                        detail: e.to_string(),
                    })?;
                Ok(Relation { terms })
            })
            .collect::<Result<Vec<_>, PresentationError>>()?;
        QuadraticPresentation::new(self.quiver.clone(), relations, field)
    }

    /// Endpoints `(source, target)` of a relation, `None` when it has no terms.
    pub fn relation_endpoints(&self, ri: usize) -> Option<(usize, usize)> {
        let t = self.relations[ri].terms.first()?;
        Some((
            self.quiver.arrow(t.path[1]).source,
            self.quiver.arrow(t.path[0]).target,
        ))
    }

    pub fn is_weight_homogeneous(&self) -> HomogeneityReport {
        let mut violations = Vec::new();
        for (ri, rel) in self.relations.iter().enumerate() {
            let mut weights: Vec<Weight> = rel
                .terms
                .iter()
                .filter(|t| !t.coeff.is_zero())
                .map(|t| self.quiver.path_weight(&t.path))
                .collect();
            weights.sort();
            weights.dedup();
            if weights.len() > 1 {
                violations.push((ri, weights));
            }
        }
        HomogeneityReport {
            homogeneous: violations.is_empty(),
            violations,
        }
    }

    /// Degree-2 paths with the given endpoints, in enumeration order.
    pub fn block_paths(&self, source: usize, target: usize) -> Vec<[usize; 2]> {
        self.quiver
            .enumerate_paths(2)
            .into_iter()
            .filter(|p| p.source == source && p.target == target)
            .map(|p| [p.arrows[0], p.arrows[1]])
            .collect()
    }

    /// Coefficient matrix of all relations inside the degree-2 path space,
    /// columns indexed by `enumerate_paths(2)`.
    pub fn relation_matrix(&self) -> DenseMatrix {
        let paths: Vec<[usize; 2]> = self
            .quiver
            .enumerate_paths(2)
            .into_iter()
            .map(|p| [p.arrows[0], p.arrows[1]])
            .collect();
        self.relation_matrix_on(&paths, 0..self.relations.len())
    }

    pub(crate) fn relation_matrix_on(
        &self,
        paths: &[[usize; 2]],
        relations: impl IntoIterator<Item = usize>,
    ) -> DenseMatrix {
        let index: HashMap<[usize; 2], usize> =
            paths.iter().enumerate().map(|(i, p)| (*p, i)).collect();
        let rows = relations
            .into_iter()
            .map(|ri| {
                let mut row = vec![self.field.zero(); paths.len()];
                for t in &self.relations[ri].terms {
                    if let Some(&c) = index.get(&t.path) {
                        row[c] += &t.coeff;
                    }
                }
                row
            })
            .collect();
        DenseMatrix::from_rows(self.field, paths.len(), rows).expect("validated field")
    }

    /// Relation indices grouped by `(source, target)` block.
    pub fn relations_by_block(&self) -> BTreeMap<(usize, usize), Vec<usize>> {
        let mut out: BTreeMap<(usize, usize), Vec<usize>> = BTreeMap::new();
        for ri in 0..self.relations.len() {
            if let Some(b) = self.relation_endpoints(ri) {
                out.entry(b).or_default().push(ri);
            }
        }
        out
    }

    /// Presentation of the opposite algebra: arrows reversed, words reversed.
    pub fn opposite(&self) -> QuadraticPresentation {
        let relations = self
            .relations
            .iter()
            .map(|r| Relation {
                terms: r
                    .terms
                    .iter()
                    .map(|t| Term {
                        coeff: t.coeff.clone(),
                        path: [t.path[1], t.path[0]],
                    })
                    .collect(),
            })
            .collect();
        QuadraticPresentation {
            quiver: self.quiver.opposite(),
            relations,
            field: self.field,
        }
    }

    /// The quadratic dual: arrows reversed and renamed with
    /// [`dual_arrow_name`], weights negated, and relation space the
    /// annihilator of `R` under the pairing `⟨y*·x*, x·y⟩ = 1` (no signs).
    pub fn quadratic_dual(&self) -> QuadraticPresentation {
        let q = &self.quiver;
        let arrows: Vec<(String, String, String, Weight)> = q
            .arrows()
            .iter()
            .map(|a| {
                (
                    dual_arrow_name(&a.name),
                    q.vertices()[a.target].clone(),
                    q.vertices()[a.source].clone(),
                    -a.weight,
                )
            })
            .collect();
        let dual_quiver =
            Quiver::new(q.vertices().to_vec(), arrows).expect("dual of a valid quiver is valid");
        let by_block = self.relations_by_block();
        let mut relations = Vec::new();
        let n = q.num_vertices();
        for source in 0..n {
            for target in 0..n {
                let paths = self.block_paths(source, target);
                if paths.is_empty() {
                    continue;
                }
                let rels = by_block.get(&(source, target)).cloned().unwrap_or_default();
                let annihilator = if rels.is_empty() {
                    DenseMatrix::identity(self.field, paths.len())
                } else {
                    self.relation_matrix_on(&paths, rels)
                        .kernel_basis()
                        .expect("single field")
                };
                for k in 0..annihilator.rows() {
                    let terms = annihilator
                        .row(k)
                        .iter()
                        .zip(&paths)
                        .filter(|(c, _)| !c.is_zero())
                        .map(|(c, [x, y])| Term {
                            coeff: c.clone(),
                            path: [*y, *x],
                        })
                        .collect();
                    relations.push(Relation { terms });
                }
            }
        }
        QuadraticPresentation::new(dual_quiver, relations, self.field)
            .expect("dual relations are composable by construction")
    }

    /// Dimension of the relation span inside each `(source, target)` block.
    pub fn relation_block_dims(&self) -> BTreeMap<(usize, usize), usize> {
        self.relations_by_block()
            .into_iter()
            .map(|(block, rels)| {
                let paths = self.block_paths(block.0, block.1);
                (block, self.relation_matrix_on(&paths, rels).rank())
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dual_numbers() -> QuadraticPresentation {
        let q = Quiver::new(
            vec!["o".into()],
            vec![("x".into(), "o".into(), "o".into(), Weight(1, 0))],
        )
        .unwrap();
        let r = Relation::from_names(&q, Field::Rationals, &[(1, "x", "x")]).unwrap();
        QuadraticPresentation::new(q, vec![r], Field::Rationals).unwrap()
    }

    fn two_cycle() -> Quiver {
        Quiver::new(
            vec!["a".into(), "b".into()],
            vec![
                ("f".into(), "a".into(), "b".into(), Weight(1, 0)),
                ("g".into(), "b".into(), "a".into(), Weight(0, 1)),
                ("h".into(), "b".into(), "a".into(), Weight(-1, 1)),
            ],
        )
        .unwrap()
    }

    #[test]
    fn enumerate_small() {
        let q = two_cycle();
        assert_eq!(q.enumerate_paths(0).len(), 2);
        assert_eq!(q.enumerate_paths(1).len(), 3);
        // f·g, f·h, g·f, h·f
        assert_eq!(q.enumerate_paths(2).len(), 4);
        for p in q.enumerate_paths(3) {
            assert!(p.arrows.windows(2).all(|w| q.composable(w[0], w[1])));
        }
    }

    #[test]
    fn quiver_validation() {
        let dup = Quiver::new(vec!["a".into(), "a".into()], vec![]);
        assert!(matches!(dup, Err(PresentationError::DuplicateVertex(_))));
        let unknown = Quiver::new(
            vec!["a".into()],
            vec![("x".into(), "a".into(), "z".into(), Weight(0, 0))],
        );
        assert!(matches!(unknown, Err(PresentationError::UnknownVertex { .. })));
    }

    #[test]
    fn non_composable_relation_rejected() {
        let q = two_cycle();
        let r = Relation::from_names(&q, Field::Rationals, &[(1, "g", "h")]).unwrap();
        let err = QuadraticPresentation::new(q, vec![r], Field::Rationals).unwrap_err();
        assert!(matches!(err, PresentationError::NotComposable { relation: 0, .. }));
    }

    #[test]
    fn mixed_endpoints_rejected() {
        let q = two_cycle();
        let r = Relation::from_names(&q, Field::Rationals, &[(1, "f", "g"), (1, "g", "f")])
            .unwrap();
        let err = QuadraticPresentation::new(q, vec![r], Field::Rationals).unwrap_err();
        assert!(matches!(err, PresentationError::MixedEndpoints { relation: 0 }));
    }

    #[test]
    fn homogeneity() {
        let q = two_cycle();
        let ok = Relation::from_names(&q, Field::Rationals, &[(1, "f", "g")]).unwrap();
        let bad = Relation::from_names(&q, Field::Rationals, &[(1, "f", "g"), (1, "f", "h")])
            .unwrap();
        let p = QuadraticPresentation::new(q.clone(), vec![ok.clone()], Field::Rationals).unwrap();
        assert!(p.is_weight_homogeneous().homogeneous);
        let p = QuadraticPresentation::new(q.clone(), vec![ok, bad], Field::Rationals).unwrap();
        let report = p.is_weight_homogeneous();
        assert!(!report.homogeneous);
        assert_eq!(report.violations[0].0, 1);
        let empty = QuadraticPresentation::new(q, vec![], Field::Rationals).unwrap();
        assert!(empty.is_weight_homogeneous().homogeneous);
    }

    #[test]
    fn dual_of_zero_relations_is_everything() {
        let q = two_cycle();
        let p = QuadraticPresentation::new(q, vec![], Field::Rationals).unwrap();
        let d = p.quadratic_dual();
        assert_eq!(d.relations().len(), 4);
        assert_eq!(d.relation_matrix().rank(), 4);
    }

    #[test]
    fn dual_is_an_involution() {
        let p = dual_numbers();
        let d = p.quadratic_dual();
        assert_eq!(d.quiver().arrow(0).name, "x*");
        assert!(d.relations().is_empty());
        let dd = d.quadratic_dual();
        assert_eq!(dd.quiver(), p.quiver());
        assert_eq!(dd.relation_matrix().row_space_basis(), p.relation_matrix().row_space_basis());
    }
}
