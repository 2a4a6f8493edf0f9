//! sl₃ in its Chevalley basis acting on the arrow space of a presentation.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use crate::algebra::GradedAlgebra;
use crate::error::LieError;
use crate::invariants::Derivation;
use crate::linalg::{DenseMatrix, EchelonBasis};
use crate::presentation::{QuadraticPresentation, Weight};
use crate::scalar::{Field, Scalar};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum LieBasisElement {
    E1,
    E2,
    E12,
    F1,
    F2,
    F12,
    H1,
    H2,
}

use LieBasisElement::*;

impl LieBasisElement {
    pub const ALL: [LieBasisElement; 8] = [E1, E2, E12, F1, F2, F12, H1, H2];

    pub fn name(self) -> &'static str {
        match self {
            E1 => "E1",
            E2 => "E2",
            E12 => "E12",
            F1 => "F1",
            F2 => "F2",
            F12 => "F12",
            H1 => "H1",
            H2 => "H2",
        }
    }

    fn e(i: usize) -> Self {
        [E1, E2][i]
    }

    fn f(i: usize) -> Self {
        [F1, F2][i]
    }

    fn h(i: usize) -> Self {
        [H1, H2][i]
    }
}

impl fmt::Display for LieBasisElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Cartan matrix entry `a_ij`: `[H_i, E_j] = a_ij E_j`.
const CARTAN: [[i64; 2]; 2] = [[2, -1], [-1, 2]];

/// `F_i(source) = coeff · target` on arrows, by name; unlisted arrows go to 0.
#[derive(Clone, Debug, Default)]
pub struct LoweringData {
    pub f: [Vec<(String, String, i64)>; 2],
}

/// Matrices of the eight basis elements on the arrow space `V`; column `a`
/// holds the image of arrow `a`.
#[derive(Clone, Debug)]
pub struct LieAction {
    field: Field,
    mats: BTreeMap<LieBasisElement, DenseMatrix>,
}

impl LieAction {
    pub fn from_matrices(field: Field, mats: BTreeMap<LieBasisElement, DenseMatrix>) -> Self {
        LieAction { field, mats }
    }

    pub fn zero(field: Field, n: usize) -> Self {
        let mats = LieBasisElement::ALL
            .iter()
            .map(|&x| (x, DenseMatrix::zeros(field, n, n)))
            .collect();
        LieAction { field, mats }
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn get(&self, x: LieBasisElement) -> &DenseMatrix {
        &self.mats[&x]
    }

    pub fn set(&mut self, x: LieBasisElement, m: DenseMatrix) {
        self.mats.insert(x, m);
    }

    pub fn dim(&self) -> usize {
        self.get(H1).rows()
    }
}

fn bracket(a: &DenseMatrix, b: &DenseMatrix) -> DenseMatrix {
    a.commutator(b).expect("same shape")
}

/// Builds the action from lowering data: `H_i` diagonal by arrow weight,
/// `F_i` as given, and `E_i` solved from `[H_j,E_i] = a_ji E_i`,
/// `[E_i,F_j] = 0` (j ≠ i), `[E_i,F_i] = H_i` within vertex blocks.
pub fn preset_action(p: &QuadraticPresentation, data: &LoweringData) -> Result<LieAction, LieError> {
    let q = p.quiver();
    let field = p.field();
    let n = q.num_arrows();
    let mut action = LieAction::zero(field, n);
    for i in 0..2 {
        let mut h = DenseMatrix::zeros(field, n, n);
        for (a, arrow) in q.arrows().iter().enumerate() {
            let c = if i == 0 { arrow.weight.0 } else { arrow.weight.1 };
            h.set(a, a, field.from_i64(c));
        }
        action.set(LieBasisElement::h(i), h);
        let mut f = DenseMatrix::zeros(field, n, n);
        for (src, tgt, c) in &data.f[i] {
            let find = |name: &str| {
                q.arrow_by_name(name)
                    .ok_or_else(|| LieError::Data(format!("unknown arrow `{name}` in lowering data")))
            };
            let (s, t) = (find(src)?, find(tgt)?);
            if (q.arrow(s).source, q.arrow(s).target) != (q.arrow(t).source, q.arrow(t).target) {
                return Err(LieError::Data(format!("F{} maps {src} outside its vertex block", i + 1)));
            }
            f.set(t, s, field.from_i64(*c));
        }
        action.set(LieBasisElement::f(i), f);
    }
    // Unknown entries: (row, col) pairs of arrows in the same vertex block.
    let unknowns: Vec<(usize, usize)> = (0..n)
        .flat_map(|r| (0..n).map(move |c| (r, c)))
        .filter(|&(r, c)| {
            let (x, y) = (q.arrow(r), q.arrow(c));
            x.source == y.source && x.target == y.target
        })
        .collect();
    for i in 0..2 {
        let j = 1 - i;
        let constraint = |e: &DenseMatrix| -> Vec<DenseMatrix> {
            let mut out = Vec::new();
            for k in 0..2 {
                let hk = action.get(LieBasisElement::h(k));
                out.push(bracket(hk, e).sub(&e.scale(&field.from_i64(CARTAN[k][i]))).unwrap());
            }
            out.push(bracket(e, action.get(LieBasisElement::f(j))));
            out.push(bracket(e, action.get(LieBasisElement::f(i))));
            out
        };
        let flatten = |ms: &[DenseMatrix]| -> Vec<Scalar> {
            ms.iter().flat_map(|m| m.row_vecs().into_iter().flatten()).collect()
        };
        let columns: Vec<Vec<Scalar>> = unknowns
            .iter()
            .map(|&(r, c)| {
                let mut u = DenseMatrix::zeros(field, n, n);
                u.set(r, c, field.one());
                flatten(&constraint(&u))
            })
            .collect();
        let system = DenseMatrix::from_rows(field, columns[0].len(), columns)
            .expect("field")
            .transpose();
        let zero = DenseMatrix::zeros(field, n, n);
        let rhs_vec = flatten(&[zero.clone(), zero.clone(), zero, action.get(LieBasisElement::h(i)).clone()]);
        let rhs = DenseMatrix::from_rows(field, 1, rhs_vec.into_iter().map(|s| vec![s]).collect())
            .expect("field");
        let solution = system
            .solve(&rhs)
            .expect("shapes")
            .ok_or_else(|| LieError::InconsistentSolve(format!("no E{} satisfies the relations", i + 1)))?;
        let nullity = system.kernel_basis().expect("field").rows();
        if nullity != 0 {
            return Err(LieError::InconsistentSolve(format!(
                "E{} has a {nullity}-dimensional family of solutions",
                i + 1
            )));
        }
        let mut e = DenseMatrix::zeros(field, n, n);
        for (k, &(r, c)) in unknowns.iter().enumerate() {
            e.set(r, c, solution.get(k, 0).clone());
        }
        action.set(LieBasisElement::e(i), e);
    }
    let e12 = bracket(action.get(E1), action.get(E2));
    let f12 = bracket(action.get(F2), action.get(F1));
    action.set(E12, e12);
    action.set(F12, f12);
    Ok(action)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LieCheck {
    pub name: String,
    pub passed: bool,
}

/// Checks r1–r9, the definitions of `E12`, `F12`, and (when weights are
/// given) that `H_i` is diagonal with the arrow weights.
pub fn verify_lie_relations(a: &LieAction, weights: Option<&[Weight]>) -> Vec<LieCheck> {
    let field = a.field();
    let n = a.dim();
    let zero = DenseMatrix::zeros(field, n, n);
    let mut out = Vec::new();
    let mut check = |name: String, lhs: DenseMatrix, rhs: &DenseMatrix| {
        out.push(LieCheck {
            name,
            passed: &lhs == rhs,
        });
    };
    let g = |x| a.get(x);
    let s = |c: i64, m: &DenseMatrix| m.scale(&field.from_i64(c));
    check("r1 [H1,H2]=0".into(), bracket(g(H1), g(H2)), &zero);
    for i in 0..2 {
        let j = 1 - i;
        let (ei, fi, hi) = (g(LieBasisElement::e(i)), g(LieBasisElement::f(i)), g(LieBasisElement::h(i)));
        let (ej, fj) = (g(LieBasisElement::e(j)), g(LieBasisElement::f(j)));
        let (i1, j1) = (i + 1, j + 1);
        check(format!("r2 [H{i1},E{i1}]=2E{i1}"), bracket(hi, ei), &s(2, ei));
        check(format!("r3 [H{i1},F{i1}]=-2F{i1}"), bracket(hi, fi), &s(-2, fi));
        check(format!("r4 [H{i1},E{j1}]=-E{j1}"), bracket(hi, ej), &s(-1, ej));
        check(format!("r5 [H{i1},F{j1}]=F{j1}"), bracket(hi, fj), fj);
        check(format!("r6 [E{i1},F{j1}]=0"), bracket(ei, fj), &zero);
        check(
            format!("r7 [E{i1},[E1,E2]]=0"),
            bracket(ei, &bracket(g(E1), g(E2))),
            &zero,
        );
        check(
            format!("r8 [F{i1},[F2,F1]]=0"),
            bracket(fi, &bracket(g(F2), g(F1))),
            &zero,
        );
        check(format!("r9 [E{i1},F{i1}]=H{i1}"), bracket(ei, fi), hi);
    }
    check("E12=[E1,E2]".into(), bracket(g(E1), g(E2)), g(E12));
    check("F12=[F2,F1]".into(), bracket(g(F2), g(F1)), g(F12));
    if let Some(ws) = weights {
        for i in 0..2 {
            let mut d = DenseMatrix::zeros(field, n, n);
            for (k, w) in ws.iter().enumerate() {
                d.set(k, k, field.from_i64(if i == 0 { w.0 } else { w.1 }));
            }
            check(format!("H{} diagonal by weight", i + 1), g(LieBasisElement::h(i)).clone(), &d);
        }
    }
    out
}

/// The action on the degree-2 path space `V ⊗_𝕜 V`, by Leibniz.
#[derive(Clone, Debug)]
pub struct TensorSquare {
    field: Field,
    paths: Vec<[usize; 2]>,
    weights: Vec<Weight>,
    blocks: Vec<(usize, usize)>,
    index: HashMap<[usize; 2], usize>,
    mats: BTreeMap<LieBasisElement, DenseMatrix>,
}

pub fn tensor_action(a: &LieAction, p: &QuadraticPresentation) -> TensorSquare {
    let q = p.quiver();
    let field = a.field();
    let paths: Vec<[usize; 2]> = q
        .enumerate_paths(2)
        .into_iter()
        .map(|path| [path.arrows[0], path.arrows[1]])
        .collect();
    let index: HashMap<[usize; 2], usize> = paths.iter().enumerate().map(|(i, p)| (*p, i)).collect();
    let weights = paths.iter().map(|&[x, y]| q.arrow(x).weight + q.arrow(y).weight).collect();
    let blocks = paths
        .iter()
        .map(|&[x, y]| (q.arrow(y).source, q.arrow(x).target))
        .collect();
    let n = paths.len();
    let mut mats = BTreeMap::new();
    for x in LieBasisElement::ALL {
        let m = a.get(x);
        let mut t = DenseMatrix::zeros(field, n, n);
        for (col, &[u, v]) in paths.iter().enumerate() {
            for c in 0..m.rows() {
                let cu = m.get(c, u);
                if !cu.is_zero() {
                    let row = index[&[c, v]];
                    let cur = t.get(row, col) + cu;
                    t.set(row, col, cur);
                }
                let cv = m.get(c, v);
                if !cv.is_zero() {
                    let row = index[&[u, c]];
                    let cur = t.get(row, col) + cv;
                    t.set(row, col, cur);
                }
            }
        }
        mats.insert(x, t);
    }
    TensorSquare {
        field,
        paths,
        weights,
        blocks,
        index,
        mats,
    }
}

impl TensorSquare {
    pub fn dim(&self) -> usize {
        self.paths.len()
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn paths(&self) -> &[[usize; 2]] {
        &self.paths
    }

    pub fn path_index(&self, x: usize, y: usize) -> Option<usize> {
        self.index.get(&[x, y]).copied()
    }

    pub fn get(&self, x: LieBasisElement) -> &DenseMatrix {
        &self.mats[&x]
    }

    pub fn apply(&self, x: LieBasisElement, v: &[Scalar]) -> Vec<Scalar> {
        self.get(x).apply(v)
    }

    pub fn weight(&self, i: usize) -> Weight {
        self.weights[i]
    }

    /// `(source, target)` of each path.
    pub fn block(&self, i: usize) -> (usize, usize) {
        self.blocks[i]
    }

    /// Unit vectors of every path in the block `source → target`.
    pub fn block_space(&self, source: usize, target: usize) -> EchelonBasis {
        let mut b = EchelonBasis::new(self.field, self.dim());
        for i in 0..self.dim() {
            if self.blocks[i] == (source, target) {
                let mut v = vec![self.field.zero(); self.dim()];
                v[i] = self.field.one();
                b.insert(v);
            }
        }
        b
    }

    pub fn operators(&self) -> Vec<&DenseMatrix> {
        LieBasisElement::ALL.iter().map(|&x| self.get(x)).collect()
    }
}

/// Smallest subspace containing `vectors` and stable under `ops`.
pub fn submodule_generated(field: Field, dim: usize, vectors: &[Vec<Scalar>], ops: &[&DenseMatrix]) -> EchelonBasis {
    let mut basis = EchelonBasis::new(field, dim);
    let mut queue: Vec<Vec<Scalar>> = Vec::new();
    for v in vectors {
        if basis.insert(v.clone()) {
            queue.push(v.clone());
        }
    }
    while let Some(v) = queue.pop() {
        for op in ops {
            let w = op.apply(&v);
            if basis.insert(w.clone()) {
                queue.push(w);
            }
        }
    }
    basis
}

/// True when applying every operator to every basis vector stays inside.
pub fn is_stable(space: &EchelonBasis, ops: &[&DenseMatrix]) -> bool {
    space
        .rows()
        .iter()
        .all(|v| ops.iter().all(|op| space.contains(&op.apply(v))))
}

/// Weights of a basis of `space ∩ ker E1 ∩ ker E2`, with multiplicity.
/// `space` must be stable under `H1, H2`.
pub fn highest_weight_decomposition(space: &EchelonBasis, t: &TensorSquare) -> BTreeMap<Weight, usize> {
    let field = t.field();
    let mut by_weight: BTreeMap<Weight, Vec<usize>> = BTreeMap::new();
    for i in 0..t.dim() {
        by_weight.entry(t.weight(i)).or_default().push(i);
    }
    let mut out = BTreeMap::new();
    for (w, coords) in by_weight {
        // An H-stable space is the sum of its projections to weight spaces.
        let mut piece = EchelonBasis::new(field, t.dim());
        for row in space.rows() {
            let mut v = vec![field.zero(); t.dim()];
            for &c in &coords {
                v[c] = row[c].clone();
            }
            piece.insert(v);
        }
        if piece.dim() == 0 {
            continue;
        }
        let images: Vec<Vec<Scalar>> = piece
            .rows()
            .iter()
            .map(|v| {
                let mut img = t.apply(E1, v);
                img.extend(t.apply(E2, v));
                img
            })
            .collect();
        let rank = DenseMatrix::from_rows(field, 2 * t.dim(), images).expect("field").rank();
        let count = piece.dim() - rank;
        if count > 0 {
            out.insert(w, count);
        }
    }
    out
}

/// Each basis element's action on arrows, extended to all of `alg` by
/// Leibniz. Fails unless the relation space is stable under the action on
/// `V ⊗ V`, which is what makes the extension well defined.
pub fn extend_to_derivations(
    a: &LieAction,
    alg: &GradedAlgebra,
) -> Result<Vec<(LieBasisElement, Derivation)>, LieError> {
    let p = alg.presentation();
    let t = tensor_action(a, p);
    let mut r = EchelonBasis::new(a.field(), t.dim());
    for row in p.relation_matrix().row_vecs() {
        r.insert(row);
    }
    LieBasisElement::ALL
        .iter()
        .map(|&x| {
            if !is_stable(&r, &[t.get(x)]) {
                return Err(LieError::NotStable(x.name().to_string()));
            }
            Ok((x, Derivation::from_arrow_matrix(alg, a.get(x).clone())))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presets::{Preset, Sl3Block};

    fn action() -> (QuadraticPresentation, LieAction) {
        let p = Sl3Block.presentation(Field::Rationals).unwrap();
        let data = Sl3Block.lowering_operators().unwrap();
        let a = preset_action(&p, &data).unwrap();
        (p, a)
    }

    #[test]
    fn preset_action_satisfies_relations() {
        let (p, a) = action();
        let ws: Vec<Weight> = p.quiver().arrows().iter().map(|x| x.weight).collect();
        let checks = verify_lie_relations(&a, Some(&ws));
        assert!(checks.iter().all(|c| c.passed), "{checks:?}");
    }

    #[test]
    fn zeroed_e1_breaks_r9() {
        let (p, mut a) = action();
        let n = p.quiver().num_arrows();
        a.set(E1, DenseMatrix::zeros(Field::Rationals, n, n));
        let failed: Vec<_> = verify_lie_relations(&a, None)
            .into_iter()
            .filter(|c| !c.passed)
            .map(|c| c.name)
            .collect();
        assert!(failed.contains(&"r9 [E1,F1]=H1".to_string()));
    }

    #[test]
    fn e1_on_lowered_vector() {
        let (p, a) = action();
        let q = p.quiver();
        let src = q.arrow_by_name("v[-1,1]").unwrap();
        let hw = q.arrow_by_name("v[1,0]").unwrap();
        // F1 v[1,0] = -v[-1,1] and [E1,F1] v[1,0] = v[1,0] force E1 v[-1,1] = -v[1,0].
        assert_eq!(a.get(E1).get(hw, src), &Field::Rationals.from_i64(-1));
    }

    #[test]
    fn extended_derivations_are_derivations() {
        let (p, a) = action();
        let alg = GradedAlgebra::build(&p, 6).unwrap();
        let ds = extend_to_derivations(&a, &alg).unwrap();
        assert_eq!(ds.len(), 8);
        for (x, d) in &ds {
            assert!(d.is_derivation(&alg).unwrap(), "{x}");
        }
    }

    #[test]
    fn unstable_relations_rejected() {
        let (p, a) = action();
        let q = p.quiver().clone();
        // keep only the first relation: its sl3-orbit leaves the span
        let small = QuadraticPresentation::new(q, p.relations()[..1].to_vec(), p.field()).unwrap();
        let alg = GradedAlgebra::build(&small, 3).unwrap();
        assert!(matches!(extend_to_derivations(&a, &alg), Err(LieError::NotStable(_))));
    }
}
