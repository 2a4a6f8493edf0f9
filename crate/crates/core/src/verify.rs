//! The `verify-all` suite. Each check is a [`Check`] trait object; a preset
//! picks its checks from [`registry`] by name, and any presentation gets the
//! generic ones.

use std::cell::OnceCell;
use std::collections::BTreeMap;
use std::time::Instant;

use num_traits::ToPrimitive;

use crate::algebra::{AlgebraElement, GradedAlgebra};
use crate::error::Error;
use crate::invariants::{self, Derivation, LieQuotient};
use crate::lie::{self, LieAction, LieBasisElement, TensorSquare};
use crate::linalg::{DenseMatrix, EchelonBasis};
use crate::modules::{self, GradedModule, MinimalResolution, ModuleMap};
use crate::presentation::{QuadraticPresentation, Weight};
use crate::presets::{self, Preset};
use crate::report::{CheckRecord, Status, VerificationReport};
use crate::scalar::Field;
use crate::series::{self, ClosedForm, Poly, PolyMatrix, SeriesMatrix};
use crate::sparse::SparseVec;

#[derive(Clone, Copy, Debug)]
pub struct VerifyOptions {
    pub field: Field,
    /// Degree bound for building the algebra.
    pub max_degree: usize,
    /// Homological bound for resolutions of simples; also the build degree
    /// of the quadratic dual.
    pub imax: usize,
    /// Homological bound for the module Koszulity checks.
    pub module_imax: usize,
    pub series_order: usize,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            field: Field::Rationals,
            max_degree: 8,
            imax: 6,
            module_imax: 8,
            series_order: series::DEFAULT_SERIES_ORDER,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub expected: String,
    pub computed: String,
    pub passed: bool,
}

impl Outcome {
    /// Passes iff the two renderings agree.
    pub fn compare(expected: impl Into<String>, computed: impl Into<String>) -> Self {
        let (expected, computed) = (expected.into(), computed.into());
        let passed = expected == computed;
        Outcome {
            expected,
            computed,
            passed,
        }
    }

    pub fn judged(expected: impl Into<String>, computed: impl Into<String>, passed: bool) -> Self {
        Outcome {
            expected: expected.into(),
            computed: computed.into(),
            passed,
        }
    }
}

pub trait Check: Send + Sync {
    fn name(&self) -> &'static str;
    /// The statement under test, in plain words.
    fn claim(&self) -> &'static str;
    /// Certified only in characteristic 0; elsewhere the result is reported
    /// with status `formal`.
    fn char0_only(&self) -> bool {
        false
    }
    fn run(&self, ctx: &Context) -> Result<Outcome, Error>;
}

struct FnCheck {
    name: &'static str,
    claim: &'static str,
    char0_only: bool,
    run: fn(&Context) -> Result<Outcome, Error>,
}

impl Check for FnCheck {
    fn name(&self) -> &'static str {
        self.name
    }

    fn claim(&self) -> &'static str {
        self.claim
    }

    fn char0_only(&self) -> bool {
        self.char0_only
    }

    fn run(&self, ctx: &Context) -> Result<Outcome, Error> {
        (self.run)(ctx)
    }
}

fn check(name: &'static str, claim: &'static str, run: fn(&Context) -> Result<Outcome, Error>) -> Box<dyn Check> {
    Box::new(FnCheck {
        name,
        claim,
        char0_only: false,
        run,
    })
}

fn char0_check(name: &'static str, claim: &'static str, run: fn(&Context) -> Result<Outcome, Error>) -> Box<dyn Check> {
    Box::new(FnCheck {
        name,
        claim,
        char0_only: true,
        run,
    })
}

/// Shared, lazily built data for one run of the suite.
pub struct Context<'a> {
    pub preset: Option<&'a dyn Preset>,
    pub presentation: QuadraticPresentation,
    pub options: VerifyOptions,
    algebra: OnceCell<Result<GradedAlgebra, String>>,
    simples: OnceCell<Result<Vec<MinimalResolution>, String>>,
    modules: OnceCell<Result<BTreeMap<String, GradedModule>, String>>,
    action: OnceCell<Result<LieAction, String>>,
    derivations: OnceCell<Result<Vec<(LieBasisElement, Derivation)>, String>>,
    hh1: OnceCell<Result<LieQuotient, String>>,
}

fn cached<T>(cell: &OnceCell<Result<T, String>>, f: impl FnOnce() -> Result<T, Error>) -> Result<&T, Error> {
    cell.get_or_init(|| f().map_err(|e| e.to_string()))
        .as_ref()
        .map_err(|e| Error::Other(e.clone()))
}

impl<'a> Context<'a> {
    pub fn new(preset: Option<&'a dyn Preset>, presentation: QuadraticPresentation, options: VerifyOptions) -> Self {
        Context {
            preset,
            presentation,
            options,
            algebra: OnceCell::new(),
            simples: OnceCell::new(),
            modules: OnceCell::new(),
            action: OnceCell::new(),
            derivations: OnceCell::new(),
            hh1: OnceCell::new(),
        }
    }

    pub fn algebra(&self) -> Result<&GradedAlgebra, Error> {
        cached(&self.algebra, || {
            Ok(GradedAlgebra::build(&self.presentation, self.options.max_degree)?)
        })
    }

    pub fn hilbert(&self) -> Result<PolyMatrix, Error> {
        Ok(self.algebra()?.hilbert_matrix()?)
    }

    pub fn dual_series(&self) -> Result<SeriesMatrix, Error> {
        series::koszul_dual_series(&self.hilbert()?, self.options.series_order)
            .map_err(|_| Error::Other("Hilbert matrix is not invertible at t = 0".into()))
    }

    /// Minimal resolutions of the simples, in vertex order.
    pub fn simple_resolutions(&self) -> Result<&[MinimalResolution], Error> {
        cached(&self.simples, || {
            let alg = self.algebra()?;
            (0..alg.num_vertices())
                .map(|v| {
                    let s = GradedModule::simple(alg, v)?;
                    Ok(modules::minimal_resolution(alg, &s, self.options.imax)?)
                })
                .collect()
        })
        .map(Vec::as_slice)
    }

    fn preset(&self) -> Result<&'a dyn Preset, Error> {
        self.preset
            .ok_or_else(|| Error::Other("check needs preset data".into()))
    }

    pub fn module(&self, name: &str) -> Result<&GradedModule, Error> {
        let all = cached(&self.modules, || {
            let alg = self.algebra()?;
            self.preset()?
                .modules()
                .iter()
                .map(|spec| Ok((spec.name.to_string(), GradedModule::from_spec(alg, spec)?)))
                .collect()
        })?;
        all.get(name)
            .ok_or_else(|| Error::Other(format!("preset has no module `{name}`")))
    }

    pub fn lie_action(&self) -> Result<&LieAction, Error> {
        cached(&self.action, || {
            let data = self
                .preset()?
                .lowering_operators()
                .ok_or_else(|| Error::Other("preset has no sl3 action".into()))?;
            Ok(lie::preset_action(&self.presentation, &data)?)
        })
    }

    pub fn tensor_square(&self) -> Result<TensorSquare, Error> {
        Ok(lie::tensor_action(self.lie_action()?, &self.presentation))
    }

    /// The eight basis elements acting on the algebra by derivations.
    pub fn lie_derivations(&self) -> Result<&[(LieBasisElement, Derivation)], Error> {
        cached(&self.derivations, || {
            Ok(lie::extend_to_derivations(self.lie_action()?, self.algebra()?)?)
        })
        .map(Vec::as_slice)
    }

    pub fn hh1(&self) -> Result<&LieQuotient, Error> {
        cached(&self.hh1, || Ok(invariants::hh1_degree0(self.algebra()?)?))
    }

    pub fn named(&self, name: &str) -> Result<AlgebraElement, Error> {
        let e = self
            .preset()?
            .named_elements()
            .into_iter()
            .find(|e| e.name == name)
            .ok_or_else(|| Error::Other(format!("preset has no element `{name}`")))?;
        Ok(presets::build_named(self.algebra()?, &e)?)
    }

    fn vertex(&self, name: &str) -> Result<usize, Error> {
        self.presentation
            .quiver()
            .vertex_by_name(name)
            .ok_or_else(|| Error::Other(format!("no vertex `{name}`")))
    }

    fn arrow(&self, name: &str) -> Result<usize, Error> {
        self.presentation
            .quiver()
            .arrow_by_name(name)
            .ok_or_else(|| Error::Other(format!("no arrow `{name}`")))
    }
}

/// Checks for a preset name; `None` (an input file) gets the generic ones.
pub fn registry(preset: Option<&str>) -> Vec<Box<dyn Check>> {
    let mut out = generic_checks();
    match preset {
        Some("sl3-block") => out.extend(sl3_checks()),
        Some("sl2-block") => out.extend(sl2_checks()),
        Some("dual-numbers") => out.extend(dual_numbers_checks()),
        _ => {}
    }
    out
}

pub fn run_checks(label: &str, ctx: &Context, checks: &[Box<dyn Check>]) -> VerificationReport {
    let char0 = ctx.options.field.characteristic() == 0;
    let records = checks
        .iter()
        .map(|c| {
            let start = Instant::now();
            let outcome = c.run(ctx).unwrap_or_else(|e| Outcome::judged("completes", format!("error: {e}"), false));
            let status = if c.char0_only() && !char0 {
                Status::Formal
            } else if outcome.passed {
                Status::Pass
            } else {
                Status::Fail
            };
            CheckRecord {
                check: c.name().to_string(),
                paper_ref: c.claim().to_string(),
                expected: outcome.expected,
                computed: outcome.computed,
                status,
                seconds: start.elapsed().as_secs_f64(),
            }
        })
        .collect();
    VerificationReport::new(label, &ctx.options.field.tag(), records)
}

/// Runs every registered check for a preset over `options.field`.
pub fn verify_all(preset: &dyn Preset, options: VerifyOptions) -> Result<VerificationReport, Error> {
    let p = preset.presentation(options.field)?;
    Ok(verify_presentation(preset.name(), Some(preset), p, options))
}

/// Runs the checks of `preset` (or the generic ones) against an arbitrary
/// presentation, which need not be the preset's own.
pub fn verify_presentation(
    label: &str,
    preset: Option<&dyn Preset>,
    presentation: QuadraticPresentation,
    options: VerifyOptions,
) -> VerificationReport {
    let checks = registry(preset.map(|p| p.name()));
    let ctx = Context::new(preset, presentation, options);
    run_checks(label, &ctx, &checks)
}

// ---- formatting ----

fn fmt_matrix(m: &PolyMatrix) -> String {
    let rows: Vec<String> = (0..m.size())
        .map(|i| {
            let cells: Vec<String> = (0..m.size()).map(|j| m.entry(i, j).to_string()).collect();
            format!("[{}]", cells.join(", "))
        })
        .collect();
    format!("[{}]", rows.join(", "))
}

fn fmt_counts(names: &[String], counts: &BTreeMap<usize, usize>) -> String {
    if counts.is_empty() {
        return "0".into();
    }
    counts
        .iter()
        .map(|(v, n)| format!("{}^{n}", names[*v]))
        .collect::<Vec<_>>()
        .join(" + ")
}

fn fmt_weights(ws: &BTreeMap<Weight, usize>) -> String {
    if ws.is_empty() {
        return "0".into();
    }
    ws.iter()
        .rev()
        .map(|(w, n)| if *n == 1 { format!("L{w}") } else { format!("L{w}^{n}") })
        .collect::<Vec<_>>()
        .join(" + ")
}

fn fmt_dims(dims: &BTreeMap<usize, usize>) -> String {
    let cells: Vec<String> = dims.iter().map(|(d, n)| format!("{d}:{n}")).collect();
    format!("{{{}}}", cells.join(", "))
}

fn rank_of(field: Field, len: usize, vectors: &[SparseVec]) -> usize {
    if vectors.is_empty() {
        return 0;
    }
    let rows = vectors.iter().map(|v| v.to_dense(len, field)).collect();
    DenseMatrix::from_rows(field, len, rows).expect("field").rank()
}

fn apply_derivation(images: &[SparseVec], x: &SparseVec) -> SparseVec {
    let mut out = SparseVec::new();
    for (i, c) in x.iter() {
        out.add_scaled(&images[i], c);
    }
    out
}

// ---- generic checks ----

fn generic_checks() -> Vec<Box<dyn Check>> {
    vec![
        check(
            "algebra_finite",
            "the quotient of the path algebra by the relations is finite dimensional",
            algebra_finite,
        ),
        check(
            "simples_koszul",
            "every simple module has a linear minimal projective resolution",
            simples_koszul,
        ),
        check(
            "triple_agreement",
            "dual Hilbert series, dimensions of the quadratic dual, and Betti numbers of the simples agree",
            triple_agreement,
        ),
    ]
}

fn algebra_finite(ctx: &Context) -> Result<Outcome, Error> {
    let alg = ctx.algebra()?;
    let dims = alg.degree_dims();
    let expected = format!("a zero degree at or below {}", ctx.options.max_degree);
    Ok(match alg.vanished_at() {
        Some(n) => Outcome::judged(expected, format!("degree dims {dims:?}, zero from degree {n}"), true),
        None => Outcome::judged(expected, format!("degree dims {dims:?}, no zero degree yet"), false),
    })
}

fn simples_koszul(ctx: &Context) -> Result<Outcome, Error> {
    let names = ctx.presentation.quiver().vertices().to_vec();
    let res = ctx.simple_resolutions()?;
    let mut bad = Vec::new();
    for (v, r) in res.iter().enumerate() {
        if let Some((i, shift)) = r.first_nonlinear() {
            bad.push(format!("S_{}: P^{i} has a generator in degree {shift}", names[v]));
        }
        if !r.is_minimal() {
            bad.push(format!("S_{}: resolution not minimal", names[v]));
        }
    }
    let expected = format!("all generators of P^i in degree i, for i <= {}", ctx.options.imax);
    Ok(if bad.is_empty() {
        Outcome::judged(expected, format!("linear for {} simples", res.len()), true)
    } else {
        Outcome::judged(expected, bad.join("; "), false)
    })
}

fn triple_agreement(ctx: &Context) -> Result<Outcome, Error> {
    let s = ctx.dual_series()?;
    let n = ctx.options.imax.min(s.order());
    let dual = GradedAlgebra::build(&ctx.presentation.quadratic_dual(), n)?;
    let dual_dims = dual.block_dims();
    let res = ctx.simple_resolutions()?;
    let nv = ctx.presentation.quiver().num_vertices();
    let names = ctx.presentation.quiver().vertices();
    let mut compared = 0;
    let mut bad = Vec::new();
    for i in 0..=n {
        for a in 0..nv {
            for b in 0..nv {
                // S[b][a] = dim e_a Λ!_i e_b = multiplicity of P_b[i] in P^i(S_a).
                let series = s.coeff(b, a, i).to_integer().to_usize();
                let dual_dim = dual_dims.get(&(i, b, a)).copied().unwrap_or(0);
                let betti = if i < res[a].len() { res[a].generator_counts(i)[b] } else { 0 };
                compared += 1;
                if series != Some(dual_dim) || dual_dim != betti || !s.coeff(b, a, i).is_integer() {
                    bad.push(format!(
                        "t^{i} ({},{}): series {}, dual {dual_dim}, Betti {betti}",
                        names[b],
                        names[a],
                        s.coeff(b, a, i)
                    ));
                }
            }
        }
    }
    let expected = format!("agreement for every vertex pair and every degree <= {n}");
    Ok(if bad.is_empty() {
        Outcome::judged(expected, format!("{compared} coefficients agree"), true)
    } else {
        Outcome::judged(expected, bad.join("; "), false)
    })
}

// ---- sl3 block ----

fn sl3_checks() -> Vec<Box<dyn Check>> {
    vec![
        check("hilbert_matrix", "Hilbert series matrix of the block, with the algebra zero from degree 5", sl3_hilbert),
        check("hilbert_determinant", "the Hilbert matrix has determinant (t-1)^6 (t+1)^6", sl3_determinant),
        check(
            "dual_series_rational",
            "P(-t)^(-T) equals the displayed matrix over (t-1)^4 (t+1)^4",
            sl3_dual_rational,
        ),
        check(
            "dual_series_closed_forms",
            "dual series coefficients (k+1)^3, (k+1)(k+2)(2k+3)/2 and k(k+1)(k+2)",
            sl3_dual_closed,
        ),
        check("lie_relations", "the arrow space carries an sl3 action satisfying r1-r9", sl3_lie_relations),
        check(
            "relation_closure",
            "the sl3-submodule generated by the five relation generators is the span of the 36 relations",
            sl3_relation_closure,
        ),
        check("relations_stable", "the relation space is an sl3-submodule of V⊗V", sl3_relations_stable),
        char0_check(
            "tensor_square_decomposition",
            "sl3-module structure of each vertex block of V⊗V",
            sl3_decomposition,
        ),
        check(
            "derivation_leibniz",
            "the sl3 action extends to the algebra by derivations",
            sl3_leibniz,
        ),
        check(
            "centre_product_table",
            "products of each arrow with the Casimir-type elements V and W",
            sl3_product_table,
        ),
        check("centre", "the centre has basis 1, z_gamma_lambda, z_mu_lambda and the socles of the projectives", sl3_centre),
        check(
            "centre_sign",
            "z_gamma_lambda and z_mu_lambda are central with -3 on the loop term, not +3",
            sl3_centre_sign,
        ),
        check("centre_sl3_invariant", "derivations preserve the centre", sl3_centre_invariant),
        check("hh1_degree0", "degree-zero HH^1 is isomorphic to gl3", sl3_hh1),
        check(
            "hh1_generators",
            "degree-zero HH^1 is spanned by the grading derivation and the sl3 image",
            sl3_hh1_generators,
        ),
        check(
            "projective_layers",
            "first and second graded pieces of the indecomposable projectives",
            sl3_projective_layers,
        ),
        check("verma_bases", "bases of the modules corresponding to the Verma modules", sl3_verma_bases),
        check("verma_identities", "sign identities between degree-2 basis vectors of the Verma correspondents", sl3_verma_identities),
        check("module_dims", "dimensions of M_gamma, M_mu, M_lambda, M and Omega(M)", sl3_module_dims),
        check("exact_sequences", "the sequences M_seq, OM_seq and M_res are exact", sl3_exact_sequences),
        check(
            "syzygy_of_M",
            "the projective cover of Omega(M) is Λe_gamma[1] + Λe_mu[1]",
            sl3_syzygy,
        ),
        check("verma_koszul", "M_lambda, M_gamma and M_mu are Koszul modules", sl3_verma_koszul),
    ]
}

fn sl3_expected_hilbert(labels: Vec<String>) -> PolyMatrix {
    PolyMatrix::from_i64s(
        labels,
        vec![
            vec![vec![1, 0, 1, 0, 1], vec![0, 3, 0, 3], vec![0, 0, 3]],
            vec![vec![0, 3, 0, 3], vec![1, 0, 10, 0, 1], vec![0, 3, 0, 3]],
            vec![vec![0, 0, 3], vec![0, 3, 0, 3], vec![1, 0, 1, 0, 1]],
        ],
    )
}

fn sl3_hilbert(ctx: &Context) -> Result<Outcome, Error> {
    let h = ctx.hilbert()?;
    let expected = sl3_expected_hilbert(h.labels().to_vec());
    let vanish = ctx.algebra()?.vanished_at();
    Ok(Outcome::compare(
        format!("{}, zero from degree 5", fmt_matrix(&expected)),
        format!(
            "{}, zero from degree {}",
            fmt_matrix(&h),
            vanish.map_or("-".into(), |n| n.to_string())
        ),
    ))
}

fn sl3_determinant(ctx: &Context) -> Result<Outcome, Error> {
    let det = ctx.hilbert()?.det();
    let expected = &Poly::binomial_power(-1, 6) * &Poly::binomial_power(1, 6);
    Ok(Outcome::compare(expected.to_string(), det.to_string()))
}

fn sl3_dual_rational(ctx: &Context) -> Result<Outcome, Error> {
    let s = ctx.dual_series()?;
    let a = vec![1, 0, 4, 0, 1];
    let b = vec![0, 3, 0, 3];
    let c = vec![0, 0, 6];
    let numerator = PolyMatrix::from_i64s(
        s.labels().to_vec(),
        vec![
            vec![a.clone(), b.clone(), c.clone()],
            vec![b.clone(), a.clone(), b.clone()],
            vec![c, b, a],
        ],
    );
    let denominator = &Poly::binomial_power(-1, 4) * &Poly::binomial_power(1, 4);
    let bad: Vec<String> = series::compare_rational_form(&s, &numerator, &denominator)
        .into_iter()
        .filter_map(|e| {
            e.first_mismatch
                .map(|m| format!("entry ({},{}) t^{}: {} vs {}", e.row, e.col, m.index, m.computed, m.expected))
        })
        .collect();
    let expected = format!(
        "({}) · P(-t)^(-T) = {} up to t^{}",
        denominator,
        fmt_matrix(&numerator),
        s.order()
    );
    Ok(if bad.is_empty() {
        Outcome::judged(expected, "all 9 entries agree", true)
    } else {
        Outcome::judged(expected, bad.join("; "), false)
    })
}

fn sl3_closed_forms() -> Vec<Vec<ClosedForm>> {
    let diag = ClosedForm::new(0, &[1, 3, 3, 1], 1);
    let odd = ClosedForm::new(1, &[6, 13, 9, 2], 2);
    let far = ClosedForm::new(0, &[0, 2, 3, 1], 1);
    vec![
        vec![diag.clone(), odd.clone(), far.clone()],
        vec![odd.clone(), diag.clone(), odd.clone()],
        vec![far, odd, diag],
    ]
}

fn sl3_dual_closed(ctx: &Context) -> Result<Outcome, Error> {
    let s = ctx.dual_series()?;
    let bad: Vec<String> = series::compare_closed_form(&s, &sl3_closed_forms())
        .into_iter()
        .filter_map(|e| {
            e.first_mismatch
                .map(|m| format!("entry ({},{}) t^{}: {} vs {}", e.row, e.col, m.index, m.computed, m.expected))
        })
        .collect();
    let expected = format!("closed forms hold for every coefficient up to t^{}", s.order());
    Ok(if bad.is_empty() {
        let sample = |i, j, k| s.coeff(i, j, k).to_string();
        Outcome::judged(
            expected,
            format!(
                "all 9 entries agree; t^{} coefficients {}, {}, {}",
                s.order(),
                sample(0, 0, s.order()),
                sample(0, 1, s.order()),
                sample(0, 2, s.order())
            ),
            true,
        )
    } else {
        Outcome::judged(expected, bad.join("; "), false)
    })
}

fn sl3_lie_relations(ctx: &Context) -> Result<Outcome, Error> {
    let a = ctx.lie_action()?;
    let weights: Vec<Weight> = ctx.presentation.quiver().arrows().iter().map(|x| x.weight).collect();
    let checks = lie::verify_lie_relations(a, Some(&weights));
    let failed: Vec<&str> = checks.iter().filter(|c| !c.passed).map(|c| c.name.as_str()).collect();
    let expected = format!("{} of {} identities hold", checks.len(), checks.len());
    Ok(if failed.is_empty() {
        Outcome::compare(expected.clone(), expected)
    } else {
        Outcome::judged(expected, format!("failed: {}", failed.join(", ")), false)
    })
}

fn relation_space(ctx: &Context, dim: usize) -> EchelonBasis {
    let mut r = EchelonBasis::new(ctx.options.field, dim);
    for row in ctx.presentation.relation_matrix().row_vecs() {
        r.insert(row);
    }
    r
}

fn sl3_relation_closure(ctx: &Context) -> Result<Outcome, Error> {
    let field = ctx.options.field;
    let t = ctx.tensor_square()?;
    let gens = ctx.preset()?.relation_generators();
    let mut vectors = Vec::new();
    for g in &gens {
        let mut v = vec![field.zero(); t.dim()];
        for (c, x, y) in g {
            let i = t
                .path_index(ctx.arrow(x)?, ctx.arrow(y)?)
                .ok_or_else(|| Error::Other(format!("{x}·{y} is not a path")))?;
            v[i] = &v[i] + &field.from_i64(*c);
        }
        vectors.push(v);
    }
    let closure = lie::submodule_generated(field, t.dim(), &vectors, &t.operators());
    let r = relation_space(ctx, t.dim());
    let equal = closure.dim() == r.dim()
        && closure.rows().iter().all(|v| r.contains(v))
        && r.rows().iter().all(|v| closure.contains(v));
    Ok(Outcome::judged(
        "closure of 5 generators has dim 36 and equals the relation span",
        format!(
            "closure of {} generators has dim {}, relation span dim {}, {}",
            gens.len(),
            closure.dim(),
            r.dim(),
            if equal { "equal" } else { "different" }
        ),
        equal && r.dim() == 36 && gens.len() == 5,
    ))
}

fn sl3_relations_stable(ctx: &Context) -> Result<Outcome, Error> {
    let t = ctx.tensor_square()?;
    let r = relation_space(ctx, t.dim());
    let unstable: Vec<&str> = LieBasisElement::ALL
        .iter()
        .filter(|&&x| !lie::is_stable(&r, &[t.get(x)]))
        .map(|x| x.name())
        .collect();
    let expected = "stable under all 8 basis elements";
    Ok(if unstable.is_empty() {
        Outcome::compare(expected, expected)
    } else {
        Outcome::judged(expected, format!("not stable under {}", unstable.join(", ")), false)
    })
}

/// `(source, middle, target)` of the two-arrow paths in each block, and the
/// expected highest weights. Blocks with the same source and target but
/// different middle vertices are listed separately.
const SL3_TENSOR_BLOCKS: [(&str, &str, &str, &[(Weight, usize)]); 6] = [
    ("gamma", "lambda", "gamma", &[(Weight(1, 1), 1), (Weight(0, 0), 1)]),
    ("lambda", "gamma", "lambda", &[(Weight(1, 1), 1), (Weight(0, 0), 1)]),
    ("lambda", "mu", "lambda", &[(Weight(1, 1), 1), (Weight(0, 0), 1)]),
    ("mu", "lambda", "mu", &[(Weight(1, 1), 1), (Weight(0, 0), 1)]),
    ("gamma", "lambda", "mu", &[(Weight(2, 0), 1), (Weight(0, 1), 1)]),
    ("mu", "lambda", "gamma", &[(Weight(1, 0), 1), (Weight(0, 2), 1)]),
];

fn sl3_decomposition(ctx: &Context) -> Result<Outcome, Error> {
    let field = ctx.options.field;
    let t = ctx.tensor_square()?;
    let q = ctx.presentation.quiver();
    let mut expected = Vec::new();
    let mut computed = Vec::new();
    for (s, m, e, hw) in SL3_TENSOR_BLOCKS {
        let (s_, m_, e_) = (ctx.vertex(s)?, ctx.vertex(m)?, ctx.vertex(e)?);
        let mut space = EchelonBasis::new(field, t.dim());
        for (i, &[x, y]) in t.paths().iter().enumerate() {
            if q.arrow(y).source == s_ && q.arrow(y).target == m_ && q.arrow(x).target == e_ {
                let mut v = vec![field.zero(); t.dim()];
                v[i] = field.one();
                space.insert(v);
            }
        }
        let label = format!("{s}->{m}->{e}");
        expected.push(format!("{label}: {}", fmt_weights(&hw.iter().copied().collect())));
        computed.push(format!("{label}: {}", fmt_weights(&lie::highest_weight_decomposition(&space, &t))));
    }
    Ok(Outcome::compare(expected.join("; "), computed.join("; ")))
}

fn sl3_leibniz(ctx: &Context) -> Result<Outcome, Error> {
    let alg = ctx.algebra()?;
    let mut defects = Vec::new();
    for (x, d) in ctx.lie_derivations()? {
        let images = d.extend(alg)?;
        defects.push(format!("{x}:{}", invariants::leibniz_defects(alg, &images)?));
    }
    let expected: Vec<String> = LieBasisElement::ALL.iter().map(|x| format!("{x}:0")).collect();
    Ok(Outcome::compare(
        format!("defective basis pairs {}", expected.join(" ")),
        format!("defective basis pairs {}", defects.join(" ")),
    ))
}

/// Multiples of `x·x̄·x` in the products `x·V, V·x, x·W, W·x`, keyed by arrow
/// letter and source vertex. `x̄` is the arrow of the same letter with the
/// opposite weight.
const SL3_PRODUCT_TABLE: [(char, &str, &str, [i64; 4]); 4] = [
    ('v', "gamma", "lambda", [0, 1, 0, 2]),
    ('v', "lambda", "gamma", [1, 0, 2, 0]),
    ('w', "lambda", "mu", [2, 0, 1, 0]),
    ('w', "mu", "lambda", [0, 2, 0, 1]),
];

fn sl3_product_table(ctx: &Context) -> Result<Outcome, Error> {
    let alg = ctx.algebra()?;
    let q = ctx.presentation.quiver();
    let big_v = ctx.named("V")?;
    let big_w = ctx.named("W")?;
    let mut cells = 0;
    let mut bad = Vec::new();
    for (letter, s, t, coeffs) in SL3_PRODUCT_TABLE {
        let (s_, t_) = (ctx.vertex(s)?, ctx.vertex(t)?);
        let arrows: Vec<usize> = (0..q.num_arrows())
            .filter(|&a| {
                let x = q.arrow(a);
                x.name.starts_with(letter) && x.source == s_ && x.target == t_
            })
            .collect();
        let columns = ["x·V", "V·x", "x·W", "W·x"];
        for (col, &c) in coeffs.iter().enumerate() {
            cells += 1;
            for &a in &arrows {
                let arrow = q.arrow(a);
                let bar = presets::arrow_name(letter, -arrow.weight);
                let x = alg.arrow(&arrow.name)?;
                let product = match col {
                    0 => alg.multiply(&x, &big_v)?,
                    1 => alg.multiply(&big_v, &x)?,
                    2 => alg.multiply(&x, &big_w)?,
                    _ => alg.multiply(&big_w, &x)?,
                };
                let xyx = alg.path_element(&[&arrow.name, &bar, &arrow.name])?;
                let want = xyx.scale(&ctx.options.field.from_i64(c));
                if product != want {
                    bad.push(format!("{} for x = {}", columns[col], arrow.name));
                }
            }
            if arrows.len() != 3 {
                bad.push(format!("{letter}: {s}->{t} has {} arrows", arrows.len()));
            }
        }
    }
    let expected = format!("{cells} of {cells} cells hold for every arrow");
    Ok(if bad.is_empty() {
        Outcome::compare(expected.clone(), expected)
    } else {
        Outcome::judged(expected, format!("failed: {}", bad.join(", ")), false)
    })
}

fn sl3_centre(ctx: &Context) -> Result<Outcome, Error> {
    let alg = ctx.algebra()?;
    let field = ctx.options.field;
    let z = invariants::centre(alg)?;
    let mut elements = vec![
        ("1".to_string(), alg.one()),
        ("z_gamma_lambda".to_string(), ctx.named("z_gamma_lambda")?),
        ("z_mu_lambda".to_string(), ctx.named("z_mu_lambda")?),
    ];
    for v in ["gamma", "lambda", "mu"] {
        let socle = invariants::projective_socle(alg, ctx.vertex(v)?)?;
        if socle.len() != 1 {
            return Ok(Outcome::judged(
                "one-dimensional socle for each projective",
                format!("socle of Λe_{v} has dim {}", socle.len()),
                false,
            ));
        }
        elements.push((format!("z_{v}"), socle[0].clone()));
    }
    let mut non_central = Vec::new();
    for (name, x) in &elements {
        if !invariants::is_central(alg, x)? {
            non_central.push(name.clone());
        }
    }
    let coords: Vec<SparseVec> = elements.iter().map(|(_, x)| x.coords().clone()).collect();
    let rank = rank_of(field, alg.dim(), &coords);
    let names: Vec<&str> = elements.iter().map(|(n, _)| n.as_str()).collect();
    let expected = format!(
        "dim 6, graded {{0:1, 2:2, 4:3}}; {} central, rank 6",
        names.join(", ")
    );
    let computed = format!(
        "dim {}, graded {}; {}, rank {rank}",
        z.dim(),
        fmt_dims(&z.graded_dims),
        if non_central.is_empty() {
            format!("{} central", names.join(", "))
        } else {
            format!("not central: {}", non_central.join(", "))
        }
    );
    Ok(Outcome::compare(expected, computed))
}

fn sl3_centre_sign(ctx: &Context) -> Result<Outcome, Error> {
    let alg = ctx.algebra()?;
    let mut parts = Vec::new();
    for name in ["z_gamma_lambda", "z_mu_lambda", "z_gamma_lambda_printed", "z_mu_lambda_printed"] {
        let central = invariants::is_central(alg, &ctx.named(name)?)?;
        parts.push(format!("{name} {}", if central { "central" } else { "not central" }));
    }
    Ok(Outcome::compare(
        "z_gamma_lambda central, z_mu_lambda central, z_gamma_lambda_printed not central, z_mu_lambda_printed not central",
        parts.join(", "),
    ))
}

fn sl3_centre_invariant(ctx: &Context) -> Result<Outcome, Error> {
    let alg = ctx.algebra()?;
    let z = invariants::centre(alg)?;
    let mut moved = Vec::new();
    for (x, d) in ctx.lie_derivations()? {
        let images = d.extend(alg)?;
        for (k, e) in z.elements.iter().enumerate() {
            let image = alg.element(apply_derivation(&images, e.coords()));
            if !image.is_zero() && !invariants::is_central(alg, &image)? {
                moved.push(format!("{x} on centre vector {k}"));
            }
        }
    }
    let expected = "every sl3 derivation maps the centre into itself";
    Ok(if moved.is_empty() {
        Outcome::compare(expected, expected)
    } else {
        Outcome::judged(expected, format!("leaves the centre: {}", moved.join(", ")), false)
    })
}

fn fmt_hh1(q: &LieQuotient) -> String {
    format!(
        "derivations {}, inner {}, quotient {}, derived subalgebra {}, Lie centre {}",
        q.derivations.dim(),
        q.inner.dim(),
        q.dim(),
        q.signature.derived_dim,
        q.signature.centre_dim
    )
}

fn sl3_hh1(ctx: &Context) -> Result<Outcome, Error> {
    Ok(Outcome::compare(
        "derivations 11, inner 2, quotient 9, derived subalgebra 8, Lie centre 1",
        fmt_hh1(ctx.hh1()?),
    ))
}

fn sl3_hh1_generators(ctx: &Context) -> Result<Outcome, Error> {
    let alg = ctx.algebra()?;
    let q = ctx.hh1()?;
    let mut ds = vec![invariants::grading_derivation(alg)];
    ds.extend(ctx.lie_derivations()?.iter().map(|(_, d)| d.clone()));
    let rank = q.span_rank(&ds);
    Ok(Outcome::compare(
        "grading derivation and 8 sl3 derivations span a 9-dimensional quotient of dim 9",
        format!(
            "grading derivation and {} sl3 derivations span a {}-dimensional quotient of dim {}",
            ds.len() - 1,
            rank.map_or("-".into(), |r| r.to_string()),
            q.dim()
        ),
    ))
}

fn sl3_projective_layers(ctx: &Context) -> Result<Outcome, Error> {
    let alg = ctx.algebra()?;
    let names = ctx.presentation.quiver().vertices().to_vec();
    let piece = |v: &str, degree: i64| -> Result<String, Error> {
        let p = GradedModule::projective(alg, ctx.vertex(v)?, 0)?;
        let counts: BTreeMap<usize, usize> = p
            .piece_dims()
            .into_iter()
            .filter(|((d, _), _)| *d == degree)
            .map(|((_, w), n)| (w, n))
            .collect();
        Ok(format!("P_{v} degree {degree}: {}", fmt_counts(&names, &counts)))
    };
    let computed = [piece("lambda", 1)?, piece("lambda", 2)?, piece("gamma", 2)?];
    Ok(Outcome::compare(
        "P_lambda degree 1: gamma^3 + mu^3; P_lambda degree 2: lambda^10; P_gamma degree 2: gamma^1 + mu^3",
        computed.join("; "),
    ))
}

/// Basis vectors of the Verma correspondents, as words from the generator.
const SL3_VERMA_BASES: [(&str, [&[&str]; 4]); 3] = [
    ("M_gamma", [&[], &["v[-1,1]"], &["v[0,-1]"], &["w[-1,1]", "v[0,-1]"]]),
    ("M_mu", [&[], &["w[-1,0]"], &["w[1,-1]"], &["v[1,-1]", "w[-1,0]"]]),
    ("M_lambda", [&[], &["w[0,-1]"], &["v[-1,0]"], &["v[0,-1]", "v[-1,0]"]]),
];

/// `a = -b` in the module: `(module, a, b)`.
const SL3_VERMA_IDENTITIES: [(&str, [&str; 2], [&str; 2]); 3] = [
    ("M_gamma", ["w[-1,1]", "v[0,-1]"], ["w[0,-1]", "v[-1,1]"]),
    ("M_mu", ["v[1,-1]", "w[-1,0]"], ["v[-1,0]", "w[1,-1]"]),
    ("M_lambda", ["v[0,-1]", "v[-1,0]"], ["w[-1,0]", "w[0,-1]"]),
];

fn word(ws: &[&str]) -> String {
    if ws.is_empty() {
        "e".into()
    } else {
        ws.join("·")
    }
}

fn sl3_verma_bases(ctx: &Context) -> Result<Outcome, Error> {
    let alg = ctx.algebra()?;
    let mut expected = Vec::new();
    let mut computed = Vec::new();
    for (name, words) in SL3_VERMA_BASES {
        let m = ctx.module(name)?;
        let vectors = words
            .iter()
            .map(|w| m.element_from_terms(alg, &[(0, 1, w.iter().map(|s| s.to_string()).collect())]))
            .collect::<Result<Vec<_>, _>>()?;
        let listed: Vec<String> = words.iter().map(|w| word(w)).collect();
        expected.push(format!("{name} (dim 4): basis {}", listed.join(", ")));
        let rank = rank_of(ctx.options.field, m.dim(), &vectors);
        computed.push(if rank == 4 && m.dim() == 4 {
            format!("{name} (dim 4): basis {}", listed.join(", "))
        } else {
            format!("{name} (dim {}): listed vectors have rank {rank}", m.dim())
        });
    }
    Ok(Outcome::compare(expected.join("; "), computed.join("; ")))
}

fn sl3_verma_identities(ctx: &Context) -> Result<Outcome, Error> {
    let alg = ctx.algebra()?;
    let mut expected = Vec::new();
    let mut computed = Vec::new();
    for (name, a, b) in SL3_VERMA_IDENTITIES {
        let m = ctx.module(name)?;
        let to_terms = |w: [&str; 2]| w.iter().map(|s| s.to_string()).collect::<Vec<_>>();
        let sum = m.element_from_terms(alg, &[(0, 1, to_terms(a)), (0, 1, to_terms(b))])?;
        let lhs = m.element_from_terms(alg, &[(0, 1, to_terms(a))])?;
        expected.push(format!("{name}: {} = -{}", word(&a), word(&b)));
        computed.push(if sum.is_zero() && !lhs.is_zero() {
            format!("{name}: {} = -{}", word(&a), word(&b))
        } else {
            format!("{name}: {} + {} = {}", word(&a), word(&b), m.display_vector(&sum))
        });
    }
    Ok(Outcome::compare(expected.join("; "), computed.join("; ")))
}

fn sl3_module_dims(ctx: &Context) -> Result<Outcome, Error> {
    let names = ["M_gamma", "M_mu", "M_lambda", "M", "Omega(M)"];
    let computed = names
        .iter()
        .map(|n| Ok(format!("{n} {}", ctx.module(n)?.dim())))
        .collect::<Result<Vec<_>, Error>>()?;
    Ok(Outcome::compare(
        "M_gamma 4, M_mu 4, M_lambda 4, M 12, Omega(M) 12",
        computed.join(", "),
    ))
}

fn sl3_exact_sequences(ctx: &Context) -> Result<Outcome, Error> {
    let alg = ctx.algebra()?;
    let mut expected = Vec::new();
    let mut computed = Vec::new();
    let mut all_exact = true;
    for seq in ctx.preset()?.sequences() {
        let maps = seq
            .maps
            .iter()
            .map(|spec| {
                let source = ctx.module(spec.source)?;
                let target = ctx.module(spec.target)?;
                let images = spec
                    .images
                    .iter()
                    .map(|terms| target.element_from_terms(alg, terms))
                    .collect::<Result<Vec<_>, _>>()?;
                Ok(ModuleMap::from_generator_images(source, target, images)?)
            })
            .collect::<Result<Vec<_>, Error>>()?;
        let report = modules::verify_exact_sequence(&maps)?;
        all_exact &= report.exact;
        expected.push(format!("{} exact", seq.name));
        computed.push(if report.exact {
            format!("{} exact, dims {:?}", seq.name, report.dims)
        } else {
            format!("{} not exact: {}", seq.name, report.failures.join(", "))
        });
    }
    Ok(Outcome::judged(
        format!("{} in every internal degree", expected.join(", ")),
        computed.join("; "),
        all_exact && !expected.is_empty(),
    ))
}

fn sl3_syzygy(ctx: &Context) -> Result<Outcome, Error> {
    let alg = ctx.algebra()?;
    let names = ctx.presentation.quiver().vertices().to_vec();
    let r = modules::minimal_resolution(alg, ctx.module("M")?, 1)?;
    let cover: Vec<String> = r
        .betti
        .get(1)
        .map(|b| b.iter().map(|s| format!("Λe_{}[{}]", names[s.vertex], s.shift)).collect())
        .unwrap_or_default();
    let kernel = GradedModule::projective(alg, ctx.vertex("lambda")?, 0)?.dim() - ctx.module("M")?.dim();
    Ok(Outcome::compare(
        "cover Λe_gamma[1] + Λe_mu[1], dim 12",
        format!("cover {}, dim {kernel}", cover.join(" + ")),
    ))
}

fn sl3_verma_koszul(ctx: &Context) -> Result<Outcome, Error> {
    let alg = ctx.algebra()?;
    let imax = ctx.options.module_imax;
    let mut parts = Vec::new();
    for name in ["M_lambda", "M_gamma", "M_mu"] {
        let r = modules::minimal_resolution(alg, ctx.module(name)?, imax)?;
        parts.push(match r.first_nonlinear() {
            None => format!("{name} linear"),
            Some((i, d)) => format!("{name} nonlinear at P^{i} (degree {d})"),
        });
    }
    Ok(Outcome::compare(
        format!("M_lambda linear, M_gamma linear, M_mu linear (to P^{imax})"),
        format!("{} (to P^{imax})", parts.join(", ")),
    ))
}

// ---- sl2 block ----

fn sl2_checks() -> Vec<Box<dyn Check>> {
    vec![
        check(
            "total_dimension",
            "dimension of the basic algebra of the smash product, taken as 16",
            sl2_total_dimension,
        ),
        check("centre", "the centre has dimension 3", sl2_centre),
        check("hh1_degree0", "HH^1 is isomorphic to gl2", sl2_hh1),
    ]
}

fn sl2_total_dimension(ctx: &Context) -> Result<Outcome, Error> {
    let alg = ctx.algebra()?;
    Ok(Outcome::compare(
        "16",
        alg.dim().to_string(),
    ))
}

fn sl2_centre(ctx: &Context) -> Result<Outcome, Error> {
    let z = invariants::centre(ctx.algebra()?)?;
    Ok(Outcome::compare("3", z.dim().to_string()))
}

fn sl2_hh1(ctx: &Context) -> Result<Outcome, Error> {
    let q = ctx.hh1()?;
    Ok(Outcome::compare(
        "quotient 4, derived subalgebra 3, Lie centre 1",
        format!(
            "quotient {}, derived subalgebra {}, Lie centre {}",
            q.dim(),
            q.signature.derived_dim,
            q.signature.centre_dim
        ),
    ))
}

// ---- dual numbers ----

fn dual_numbers_checks() -> Vec<Box<dyn Check>> {
    vec![
        check("centre", "k[x]/(x^2) is commutative, so its centre is 2-dimensional", dual_centre),
        check("hh1_degree0", "x -> cx are the only degree-zero derivations and none is inner", dual_hh1),
    ]
}

fn dual_centre(ctx: &Context) -> Result<Outcome, Error> {
    let z = invariants::centre(ctx.algebra()?)?;
    Ok(Outcome::compare("2", z.dim().to_string()))
}

fn dual_hh1(ctx: &Context) -> Result<Outcome, Error> {
    Ok(Outcome::compare(
        "derivations 1, inner 0, quotient 1, derived subalgebra 0, Lie centre 1",
        fmt_hh1(ctx.hh1()?),
    ))
}
