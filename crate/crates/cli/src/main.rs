use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context as _, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use quadalg::algebra::GradedAlgebra;
use quadalg::invariants;
use quadalg::io::load_presentation;
use quadalg::lie;
use quadalg::linalg::EchelonBasis;
use quadalg::modules::{self, GradedModule};
use quadalg::presets::{self, Preset};
use quadalg::series;
use quadalg::verify::{self, VerifyOptions};
use quadalg::{Field, QuadraticPresentation};

/// Exact computations with quadratic quiver algebras.
#[derive(Parser)]
#[command(name = "quadalg", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build the algebra and print its graded dimensions.
    Build(Common),
    /// Hilbert series matrix and its determinant.
    Hilbert(Common),
    /// Hilbert series of the Koszul dual, P(-t)^(-T).
    DualSeries(Common),
    /// Basis of the centre.
    Centre(Common),
    /// Degree-zero derivations and HH^1.
    Derivations(Common),
    /// sl3-module structure of the blocks of V⊗V and of the relations.
    Decompose(Common),
    /// Minimal graded projective resolution of a module.
    Resolve(Common),
    /// Ext^{i,j}(M, S) table of a module.
    Ext(Common),
    /// Run every check registered for the preset.
    VerifyAll(Common),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Table,
    JsonLike,
}

#[derive(Args)]
struct Common {
    /// Built-in presentation (sl3-block, sl2-block, dual-numbers).
    #[arg(long, conflicts_with = "input")]
    preset: Option<String>,
    /// JSON presentation file.
    #[arg(long)]
    input: Option<PathBuf>,
    /// Q or Fp:<p>. Defaults to Q for presets and to the file's field for inputs.
    #[arg(long)]
    field: Option<String>,
    #[arg(long, default_value_t = 8)]
    max_degree: usize,
    #[arg(long, default_value_t = 6)]
    imax: usize,
    #[arg(long, default_value_t = series::DEFAULT_SERIES_ORDER)]
    series_order: usize,
    /// Write the output to this file as well.
    #[arg(long)]
    report: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Table)]
    format: Format,
    /// S:<vertex>, P:<vertex>, or a module name of the preset. Resolve and ext
    /// default to every simple.
    #[arg(long)]
    module: Vec<String>,
}

struct Loaded {
    label: String,
    preset: Option<Box<dyn Preset>>,
    presentation: QuadraticPresentation,
}

impl Common {
    fn load(&self) -> Result<Loaded> {
        let field: Option<Field> = self.field.as_deref().map(str::parse).transpose()?;
        if let Some(path) = &self.input {
            let mut p = load_presentation(path)?;
            if let Some(f) = field {
                p = p.with_field(f)?;
            }
            return Ok(Loaded {
                label: path.display().to_string(),
                preset: None,
                presentation: p,
            });
        }
        let name = self.preset.as_deref().unwrap_or("sl3-block");
        let preset = presets::find(name)
            .map_err(|e| anyhow!("{e}; available: {}", presets::names().join(", ")))?;
        let presentation = preset.presentation(field.unwrap_or(Field::Rationals))?;
        Ok(Loaded {
            label: name.to_string(),
            preset: Some(preset),
            presentation,
        })
    }

    fn options(&self, field: Field) -> VerifyOptions {
        VerifyOptions {
            field,
            max_degree: self.max_degree,
            imax: self.imax,
            series_order: self.series_order,
            ..VerifyOptions::default()
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn run(command: Command) -> Result<ExitCode> {
    let (common, body) = match &command {
        Command::VerifyAll(c) => return verify_all(c),
        Command::Build(c) => (c, build(c)?),
        Command::Hilbert(c) => (c, hilbert(c)?),
        Command::DualSeries(c) => (c, dual_series(c)?),
        Command::Centre(c) => (c, centre(c)?),
        Command::Derivations(c) => (c, derivations(c)?),
        Command::Decompose(c) => (c, decompose(c)?),
        Command::Resolve(c) => (c, resolve(c, false)?),
        Command::Ext(c) => (c, resolve(c, true)?),
    };
    emit(common, &body)?;
    Ok(ExitCode::SUCCESS)
}

/// Output of a subcommand in both renderings.
struct Body {
    table: String,
    json: Value,
}

fn emit(c: &Common, body: &Body) -> Result<()> {
    let text = match c.format {
        Format::Table => body.table.clone(),
        Format::JsonLike => serde_json::to_string_pretty(&body.json)? + "\n",
    };
    print!("{text}");
    if let Some(path) = &c.report {
        std::fs::write(path, &text).with_context(|| format!("writing {}", path.display()))?;
    }
    Ok(())
}

fn algebra(c: &Common) -> Result<(Loaded, GradedAlgebra)> {
    let l = c.load()?;
    let alg = GradedAlgebra::build(&l.presentation, c.max_degree)?;
    Ok((l, alg))
}

fn build(c: &Common) -> Result<Body> {
    let (l, alg) = algebra(c)?;
    let q = l.presentation.quiver();
    let dims = alg.degree_dims();
    let mut table = format!(
        "{}: {} vertices, {} arrows, {} relations over {}\ndegree dims {:?}, total {}\n",
        l.label,
        q.num_vertices(),
        q.num_arrows(),
        l.presentation.relations().len(),
        alg.field(),
        dims,
        alg.dim()
    );
    match alg.vanished_at() {
        Some(n) => table.push_str(&format!("zero from degree {n}\n")),
        None => table.push_str(&format!("no zero degree up to {}\n", alg.max_degree())),
    }
    Ok(Body {
        table,
        json: json!({
            "source": l.label,
            "field": alg.field().tag(),
            "vertices": q.vertices(),
            "arrows": q.num_arrows(),
            "relations": l.presentation.relations().len(),
            "degree_dims": dims,
            "dim": alg.dim(),
            "vanished_at": alg.vanished_at(),
        }),
    })
}

fn hilbert(c: &Common) -> Result<Body> {
    let (_, alg) = algebra(c)?;
    let h = alg.hilbert_matrix()?;
    let det = h.det();
    Ok(Body {
        table: format!("{h}det = {det}\n"),
        json: json!({ "hilbert": h.to_json(), "det": det.to_string() }),
    })
}

fn dual_series(c: &Common) -> Result<Body> {
    let (_, alg) = algebra(c)?;
    let s = series::koszul_dual_series(&alg.hilbert_matrix()?, c.series_order)?;
    let note = if s.is_nonnegative_integral() {
        ""
    } else {
        "negative or fractional coefficients: the algebra is not Koszul\n"
    };
    Ok(Body {
        table: format!("{s}{note}"),
        json: s.to_json(),
    })
}

fn centre(c: &Common) -> Result<Body> {
    let (_, alg) = algebra(c)?;
    let z = invariants::centre(&alg)?;
    let elements: Vec<String> = z.elements.iter().map(|x| alg.format(x)).collect();
    let mut table = format!("centre: dim {}, graded {:?}\n", z.dim(), z.graded_dims);
    for e in &elements {
        table.push_str(&format!("  {e}\n"));
    }
    Ok(Body {
        table,
        json: json!({ "dim": z.dim(), "graded_dims": z.graded_dims, "basis": elements }),
    })
}

fn derivations(c: &Common) -> Result<Body> {
    let (_, alg) = algebra(c)?;
    let q = invariants::hh1_degree0(&alg)?;
    let s = &q.signature;
    Ok(Body {
        table: format!(
            "degree-zero derivations {}, inner {}, HH^1 {} (derived subalgebra {}, Lie centre {})\n",
            q.derivations.dim(),
            q.inner.dim(),
            q.dim(),
            s.derived_dim,
            s.centre_dim
        ),
        json: json!({
            "derivations": q.derivations.dim(),
            "inner": q.inner.dim(),
            "hh1": q.dim(),
            "derived_dim": s.derived_dim,
            "lie_centre_dim": s.centre_dim,
        }),
    })
}

fn decompose(c: &Common) -> Result<Body> {
    let l = c.load()?;
    let data = l
        .preset
        .as_ref()
        .and_then(|p| p.lowering_operators())
        .ok_or_else(|| anyhow!("`{}` carries no sl3 action", l.label))?;
    let p = &l.presentation;
    let action = lie::preset_action(p, &data)?;
    let t = lie::tensor_action(&action, p);
    let field = p.field();
    let names = p.quiver().vertices();
    let relations = p.relation_matrix().row_vecs();
    let by_block = p.relations_by_block();
    let formal = if field.characteristic() == 0 { "" } else { " (formal count)" };
    let mut table = String::new();
    let mut rows = Vec::new();
    for s in 0..names.len() {
        for e in 0..names.len() {
            let space = t.block_space(s, e);
            if space.dim() == 0 {
                continue;
            }
            let mut r = EchelonBasis::new(field, t.dim());
            for &i in by_block.get(&(s, e)).into_iter().flatten() {
                r.insert(relations[i].clone());
            }
            let fmt = |m: &std::collections::BTreeMap<quadalg::Weight, usize>| {
                m.iter().rev().map(|(w, n)| format!("L{w}x{n}")).collect::<Vec<_>>().join(" + ")
            };
            let vv = lie::highest_weight_decomposition(&space, &t);
            let rr = lie::highest_weight_decomposition(&r, &t);
            table.push_str(&format!(
                "{} -> {}: V⊗V = {} ; R = {}{formal}\n",
                names[s],
                names[e],
                fmt(&vv),
                if rr.is_empty() { "0".into() } else { fmt(&rr) }
            ));
            let as_json = |m: &std::collections::BTreeMap<quadalg::Weight, usize>| {
                m.iter().map(|(w, n)| json!({ "weight": [w.0, w.1], "multiplicity": n })).collect::<Vec<_>>()
            };
            rows.push(json!({
                "source": names[s], "target": names[e],
                "tensor_square": as_json(&vv), "relations": as_json(&rr),
            }));
        }
    }
    Ok(Body {
        table,
        json: json!({ "formal": !formal.is_empty(), "blocks": rows }),
    })
}

fn module_from_arg(l: &Loaded, alg: &GradedAlgebra, arg: &str) -> Result<GradedModule> {
    let q = l.presentation.quiver();
    let vertex = |name: &str| q.vertex_by_name(name).ok_or_else(|| anyhow!("no vertex `{name}`"));
    if let Some(v) = arg.strip_prefix("S:") {
        return Ok(GradedModule::simple(alg, vertex(v)?)?);
    }
    if let Some(v) = arg.strip_prefix("P:") {
        return Ok(GradedModule::projective(alg, vertex(v)?, 0)?);
    }
    let spec = l
        .preset
        .as_ref()
        .and_then(|p| p.module(arg))
        .ok_or_else(|| anyhow!("unknown module `{arg}` (use S:<vertex>, P:<vertex> or a preset module name)"))?;
    Ok(GradedModule::from_spec(alg, &spec)?)
}

fn resolve(c: &Common, ext: bool) -> Result<Body> {
    let (l, alg) = algebra(c)?;
    let names = l.presentation.quiver().vertices().to_vec();
    let args: Vec<String> = if c.module.is_empty() {
        names.iter().map(|v| format!("S:{v}")).collect()
    } else {
        c.module.clone()
    };
    let mut table = String::new();
    let mut out = Vec::new();
    for arg in &args {
        let m = module_from_arg(&l, &alg, arg)?;
        let r = modules::minimal_resolution(&alg, &m, c.imax)?;
        if ext {
            let e = r.ext_table();
            table.push_str(&format!("Ext^(i,j)({arg}, S), columns by vertex\n{e}"));
            let cells: Vec<Value> = e
                .dims
                .iter()
                .map(|((i, j, v), n)| json!({ "i": i, "j": j, "vertex": names[*v], "dim": n }))
                .collect();
            out.push(json!({ "module": arg, "diagonal": e.is_diagonal(), "ext": cells }));
            continue;
        }
        table.push_str(&format!("{arg}: {m}\n"));
        let mut terms = Vec::new();
        for i in 0..r.len() {
            let gens: Vec<String> = r.betti[i]
                .iter()
                .map(|s| format!("P_{}[{}]", names[s.vertex], s.shift))
                .collect();
            table.push_str(&format!(
                "  P^{i} = {}\n",
                if gens.is_empty() { "0".into() } else { gens.join(" + ") }
            ));
            terms.push(gens);
        }
        let linear = r.is_linear();
        table.push_str(&format!("  linear: {linear}, minimal: {}\n", r.is_minimal()));
        if let Some((i, d)) = r.first_nonlinear() {
            table.push_str(&format!("  first nonlinear generator: P^{i} in degree {d}\n"));
        }
        out.push(json!({ "module": arg, "terms": terms, "linear": linear }));
    }
    Ok(Body {
        table,
        json: Value::Array(out),
    })
}

fn verify_all(c: &Common) -> Result<ExitCode> {
    let l = c.load()?;
    if !c.module.is_empty() {
        bail!("verify-all does not take --module");
    }
    let options = c.options(l.presentation.field());
    let report = verify::verify_presentation(&l.label, l.preset.as_deref(), l.presentation, options);
    let text = match c.format {
        Format::Table => report.to_table(),
        Format::JsonLike => report.to_json() + "\n",
    };
    print!("{text}");
    if let Some(path) = &c.report {
        std::fs::write(path, report.to_json() + "\n").with_context(|| format!("writing {}", path.display()))?;
    }
    Ok(if report.passed { ExitCode::SUCCESS } else { ExitCode::from(1) })
}
