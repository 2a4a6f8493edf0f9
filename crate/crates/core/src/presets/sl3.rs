use crate::error::PresentationError;
use crate::lie::LoweringData;
use crate::presentation::{QuadraticPresentation, Quiver, Relation, Weight};
use crate::scalar::Field;

use super::{MapSpec, ModuleSpec, NamedElement, Preset, SequenceSpec, SummandSpec};

/// Index set `{(1,-1), (-1,0), (0,1)}` of the relation families.
pub const ROOT_INDEX: [Weight; 3] = [Weight(1, -1), Weight(-1, 0), Weight(0, 1)];

/// Weights of the `L(1,0)` blocks, highest first.
const FUNDAMENTAL: [Weight; 3] = [Weight(1, 0), Weight(-1, 1), Weight(0, -1)];
/// Weights of the `L(0,1)` blocks, highest first.
const DUAL_FUNDAMENTAL: [Weight; 3] = [Weight(0, 1), Weight(1, -1), Weight(-1, 0)];

pub fn arrow_name(letter: char, w: Weight) -> String {
    format!("{letter}[{},{}]", w.0, w.1)
}

/// Basic algebra of the singular sl₃ block: vertices `gamma, lambda, mu`,
/// arrows `v[i,j]`, `w[i,j]` named by weight, 36 quadratic relations.
pub struct Sl3Block;

fn v(w: Weight) -> String {
    arrow_name('v', w)
}

fn w(x: Weight) -> String {
    arrow_name('w', x)
}

fn relation_terms() -> Vec<Vec<(i64, String, String)>> {
    let a = ROOT_INDEX;
    let mut out = Vec::new();
    // e_γ R e_γ
    for &x in &a {
        for &y in &a {
            if x != y {
                out.push(vec![(1, v(x), v(-y))]);
            }
        }
    }
    for &y in &a[1..] {
        out.push(vec![(1, v(a[0]), v(-a[0])), (-1, v(y), v(-y))]);
    }
    // e_μ R e_μ
    for &x in &a {
        for &y in &a {
            if x != y {
                out.push(vec![(1, w(-x), w(y))]);
            }
        }
    }
    for &y in &a[1..] {
        out.push(vec![(1, w(-a[0]), w(a[0])), (-1, w(-y), w(y))]);
    }
    // e_μ R e_γ and e_γ R e_μ
    for i in 0..3 {
        for j in i..3 {
            let (x, y) = (a[i], a[j]);
            if i == j {
                out.push(vec![(1, w(-x), v(-x))]);
            } else {
                out.push(vec![(1, w(-x), v(-y)), (1, w(-y), v(-x))]);
            }
        }
    }
    for i in 0..3 {
        for j in i..3 {
            let (x, y) = (a[i], a[j]);
            if i == j {
                out.push(vec![(1, v(x), w(x))]);
            } else {
                out.push(vec![(1, v(x), w(y)), (1, v(y), w(x))]);
            }
        }
    }
    // e_λ R e_λ
    for &x in &a {
        for &y in &a {
            if x != y {
                out.push(vec![(1, v(-x), v(y)), (1, w(y), w(-x))]);
            }
        }
    }
    for &y in &a[1..] {
        out.push(vec![
            (1, v(-a[0]), v(a[0])),
            (1, w(a[0]), w(-a[0])),
            (-1, v(-y), v(y)),
            (-1, w(y), w(-y)),
        ]);
    }
    out
}

fn summand(vertex: &'static str, shift: i64, weight: Weight) -> SummandSpec {
    SummandSpec {
        vertex,
        shift,
        weight,
    }
}

fn p(names: &[&str]) -> Vec<String> {
    names.iter().map(|s| s.to_string()).collect()
}

impl Preset for Sl3Block {
    fn name(&self) -> &'static str {
        "sl3-block"
    }

    fn summary(&self) -> &'static str {
        "basic algebra of the singular block of restricted sl3: 3 vertices, 12 arrows, 36 relations"
    }

    fn presentation(&self, field: Field) -> Result<QuadraticPresentation, PresentationError> {
        let mut arrows = Vec::new();
        let mut add = |name: String, s: &str, t: &str, wt: Weight| {
            arrows.push((name, s.to_string(), t.to_string(), wt));
        };
        for x in FUNDAMENTAL {
            add(v(x), "gamma", "lambda", x);
        }
        for x in DUAL_FUNDAMENTAL {
            add(v(x), "lambda", "gamma", x);
        }
        for x in FUNDAMENTAL {
            add(w(x), "lambda", "mu", x);
        }
        for x in DUAL_FUNDAMENTAL {
            add(w(x), "mu", "lambda", x);
        }
        let q = Quiver::new(vec!["gamma".into(), "lambda".into(), "mu".into()], arrows)?;
        let relations = relation_terms()
            .iter()
            .map(|terms| {
                let borrowed: Vec<(i64, &str, &str)> =
                    terms.iter().map(|(c, x, y)| (*c, x.as_str(), y.as_str())).collect();
                Relation::from_names(&q, field, &borrowed)
            })
            .collect::<Result<Vec<_>, _>>()?;
        QuadraticPresentation::new(q, relations, field)
    }

    fn named_elements(&self) -> Vec<NamedElement> {
        let a = ROOT_INDEX;
        let big_v: Vec<_> = a.iter().map(|&x| (1, vec![v(-x), v(x)])).collect();
        let big_w: Vec<_> = a.iter().map(|&x| (1, vec![w(x), w(-x)])).collect();
        let scaled = |terms: &[(i64, Vec<String>)], c: i64| {
            terms.iter().map(|(k, path)| (k * c, path.clone())).collect::<Vec<_>>()
        };
        let z_gl = |c: i64| {
            let mut t = vec![(c, p(&["v[0,1]", "v[0,-1]"]))];
            t.extend(scaled(&big_v, 1));
            t.extend(scaled(&big_w, -2));
            t
        };
        let z_ml = |c: i64| {
            let mut t = vec![(c, p(&["w[0,-1]", "w[0,1]"]))];
            t.extend(scaled(&big_w, 1));
            t.extend(scaled(&big_v, -2));
            t
        };
        // The `_printed` variants carry +3 on the loop term. They fail to commute
        // with the arrows; -3 is forced by x·V, V·x, x·W, W·x on each arrow block.
        vec![
            NamedElement { name: "V", terms: big_v.clone() },
            NamedElement { name: "W", terms: big_w.clone() },
            NamedElement { name: "z_gamma_lambda", terms: z_gl(-3) },
            NamedElement { name: "z_mu_lambda", terms: z_ml(-3) },
            NamedElement { name: "z_gamma_lambda_printed", terms: z_gl(3) },
            NamedElement { name: "z_mu_lambda_printed", terms: z_ml(3) },
        ]
    }

    fn modules(&self) -> Vec<ModuleSpec> {
        let zero = Weight(0, 0);
        vec![
            ModuleSpec {
                name: "M_gamma",
                summands: vec![summand("gamma", 0, zero)],
                relations: vec![vec![(0, 1, p(&["v[1,0]"]))]],
            },
            ModuleSpec {
                name: "M_mu",
                summands: vec![summand("mu", 0, zero)],
                relations: vec![vec![(0, 1, p(&["w[0,1]"]))]],
            },
            ModuleSpec {
                name: "M_lambda",
                summands: vec![summand("lambda", 0, zero)],
                relations: ["v[0,1]", "v[1,-1]", "w[-1,1]", "w[1,0]"]
                    .iter()
                    .map(|&a| vec![(0, 1, p(&[a]))])
                    .collect(),
            },
            ModuleSpec {
                name: "M",
                summands: vec![summand("lambda", 0, zero)],
                relations: vec![vec![(0, 1, p(&["v[0,1]"]))], vec![(0, 1, p(&["w[1,0]"]))]],
            },
            ModuleSpec {
                name: "Omega(M)",
                summands: vec![summand("mu", 0, Weight(1, 0)), summand("gamma", 0, Weight(0, 1))],
                relations: vec![vec![(0, 1, p(&["w[0,1]"])), (1, 1, p(&["v[1,0]"]))]],
            },
            ModuleSpec {
                name: "M_gamma[1]+M_mu[1]",
                summands: vec![
                    summand("gamma", 1, Weight(1, -1)),
                    summand("mu", 1, Weight(-1, 1)),
                ],
                relations: vec![vec![(0, 1, p(&["v[1,0]"]))], vec![(1, 1, p(&["w[0,1]"]))]],
            },
            ModuleSpec {
                name: "M_lambda[1]",
                summands: vec![summand("lambda", 1, Weight(1, 1))],
                relations: ["v[0,1]", "v[1,-1]", "w[-1,1]", "w[1,0]"]
                    .iter()
                    .map(|&a| vec![(0, 1, p(&[a]))])
                    .collect(),
            },
            ModuleSpec {
                name: "M_gamma+M_mu",
                summands: vec![summand("gamma", 0, Weight(0, 1)), summand("mu", 0, Weight(1, 0))],
                relations: vec![vec![(0, 1, p(&["v[1,0]"]))], vec![(1, 1, p(&["w[0,1]"]))]],
            },
            ModuleSpec {
                name: "M[2]",
                summands: vec![summand("lambda", 2, Weight(1, 1))],
                relations: vec![vec![(0, 1, p(&["v[0,1]"]))], vec![(0, 1, p(&["w[1,0]"]))]],
            },
            ModuleSpec {
                name: "P_mu[1]+P_gamma[1]",
                summands: vec![summand("mu", 1, Weight(1, 0)), summand("gamma", 1, Weight(0, 1))],
                relations: vec![],
            },
            ModuleSpec {
                name: "P_lambda",
                summands: vec![summand("lambda", 0, zero)],
                relations: vec![],
            },
        ]
    }

    fn sequences(&self) -> Vec<SequenceSpec> {
        vec![
            SequenceSpec {
                name: "M_seq",
                maps: vec![
                    MapSpec {
                        name: "i",
                        source: "M_gamma[1]+M_mu[1]",
                        target: "M",
                        images: vec![vec![(0, 1, p(&["v[1,-1]"]))], vec![(0, 1, p(&["w[-1,1]"]))]],
                    },
                    MapSpec {
                        name: "pi",
                        source: "M",
                        target: "M_lambda",
                        images: vec![vec![(0, 1, vec![])]],
                    },
                ],
            },
            SequenceSpec {
                name: "OM_seq",
                maps: vec![
                    MapSpec {
                        name: "psi",
                        source: "M_lambda[1]",
                        target: "Omega(M)",
                        images: vec![vec![(1, 1, p(&["v[1,0]"]))]],
                    },
                    MapSpec {
                        name: "phi",
                        source: "Omega(M)",
                        target: "M_gamma+M_mu",
                        images: vec![vec![(1, 1, vec![])], vec![(0, 1, vec![])]],
                    },
                ],
            },
            SequenceSpec {
                name: "M_res",
                maps: vec![
                    MapSpec {
                        name: "i",
                        source: "M[2]",
                        target: "P_mu[1]+P_gamma[1]",
                        images: vec![vec![(0, 1, p(&["w[0,1]"])), (1, 1, p(&["v[1,0]"]))]],
                    },
                    MapSpec {
                        name: "j",
                        source: "P_mu[1]+P_gamma[1]",
                        target: "P_lambda",
                        images: vec![vec![(0, 1, p(&["w[1,0]"]))], vec![(0, 1, p(&["v[0,1]"]))]],
                    },
                    MapSpec {
                        name: "pi",
                        source: "P_lambda",
                        target: "M",
                        images: vec![vec![(0, 1, vec![])]],
                    },
                ],
            },
        ]
    }

    fn relation_generators(&self) -> Vec<Vec<(i64, String, String)>> {
        let t = |x: &str, y: &str| (1, x.to_string(), y.to_string());
        vec![
            vec![t("v[0,1]", "v[1,0]")],
            vec![t("w[1,0]", "v[1,0]")],
            vec![t("w[1,0]", "w[0,1]")],
            vec![t("v[0,1]", "w[0,1]")],
            vec![t("v[1,0]", "v[0,1]"), t("w[0,1]", "w[1,0]")],
        ]
    }

    fn lowering_operators(&self) -> Option<LoweringData> {
        let mut f1 = Vec::new();
        let mut f2 = Vec::new();
        for letter in ['v', 'w'] {
            let n = |x: Weight| arrow_name(letter, x);
            // L(0,1): F2 x_{0,1} = x_{1,-1}, F1 x_{1,-1} = x_{-1,0}.
            f2.push((n(Weight(0, 1)), n(Weight(1, -1)), 1));
            f1.push((n(Weight(1, -1)), n(Weight(-1, 0)), 1));
            // L(1,0): F1 x_{1,0} = -x_{-1,1}, F2 x_{-1,1} = -x_{0,-1}.
            f1.push((n(Weight(1, 0)), n(Weight(-1, 1)), -1));
            f2.push((n(Weight(-1, 1)), n(Weight(0, -1)), -1));
        }
        Some(LoweringData { f: [f1, f2] })
    }
}
