//! JSON presentation files.
//!
//! ```json
//! {"field": "Q", "vertices": ["a", "b"],
//!  "arrows": [{"name": "x", "source": "a", "target": "b", "weight": [1, 0]}],
//!  "relations": [[{"coeff": "1/2", "path": ["y", "x"]}]]}
//! ```
//! A path `[x, y]` is the product `x·y` (`y` first).

use std::path::Path as FsPath;

use serde::{Deserialize, Serialize};

use crate::error::PresentationError;
use crate::presentation::{QuadraticPresentation, Quiver, Relation, Term, Weight};
use crate::scalar::Field;

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PresentationFile {
    field: String,
    vertices: Vec<String>,
    arrows: Vec<ArrowEntry>,
    #[serde(default)]
    relations: Vec<Vec<TermEntry>>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ArrowEntry {
    name: String,
    source: String,
    target: String,
    #[serde(default)]
    weight: [i64; 2],
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TermEntry {
    coeff: String,
    path: Vec<String>,
}

/// Parses and validates a presentation from JSON text.
pub fn parse_presentation(text: &str) -> Result<QuadraticPresentation, PresentationError> {
    let file: PresentationFile = serde_json::from_str(text).map_err(|e| PresentationError::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    let field: Field = file.field.parse()?;
    let arrows = file
        .arrows
        .into_iter()
        .map(|a| (a.name, a.source, a.target, Weight(a.weight[0], a.weight[1])))
        .collect();
    let quiver = Quiver::new(file.vertices, arrows)?;
    let mut relations = Vec::with_capacity(file.relations.len());
    for (ri, rel) in file.relations.iter().enumerate() {
        let mut terms = Vec::with_capacity(rel.len());
        for t in rel {
            let [x, y] = t.path.as_slice() else {
                return Err(PresentationError::BadRelation {
                    relation: ri,
                    detail: format!("path of length {} (relations are quadratic)", t.path.len()),
                });
            };
            let find = |n: &String| {
                quiver.arrow_by_name(n).ok_or_else(|| PresentationError::UnknownArrow {
                    relation: ri,
                    arrow: n.clone(),
                })
            };
            let coeff = field.parse_scalar(&t.coeff).map_err(|e| PresentationError::BadRelation {
                relation: ri,
                detail: e.to_string(),
            })?;
            terms.push(Term {
                coeff,
                path: [find(x)?, find(y)?],
            });
        }
        relations.push(Relation::new(terms));
    }
    QuadraticPresentation::new(quiver, relations, field)
}

pub fn load_presentation(path: &FsPath) -> Result<QuadraticPresentation, PresentationError> {
    let text = std::fs::read_to_string(path).map_err(|e| PresentationError::Io(format!("{}: {e}", path.display())))?;
    parse_presentation(&text)
}

/// Serializes a presentation in the input schema.
pub fn presentation_to_json(p: &QuadraticPresentation) -> String {
    let q = p.quiver();
    let file = PresentationFile {
        field: p.field().tag(),
        vertices: q.vertices().to_vec(),
        arrows: q
            .arrows()
            .iter()
            .map(|a| ArrowEntry {
                name: a.name.clone(),
                source: q.vertices()[a.source].clone(),
                target: q.vertices()[a.target].clone(),
                weight: [a.weight.0, a.weight.1],
            })
            .collect(),
        relations: p
            .relations()
            .iter()
            .map(|r| {
                r.terms
                    .iter()
                    .map(|t| TermEntry {
                        coeff: t.coeff.to_exact_string(),
                        path: vec![q.arrow(t.path[0]).name.clone(), q.arrow(t.path[1]).name.clone()],
                    })
                    .collect()
            })
            .collect(),
    };
    serde_json::to_string_pretty(&file).expect("plain data serializes")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presets::{Preset, Sl3Block};

    #[test]
    fn round_trip_sl3() {
        let p = Sl3Block.presentation(Field::Rationals).unwrap();
        let text = presentation_to_json(&p);
        assert_eq!(parse_presentation(&text).unwrap(), p);
    }

    #[test]
    fn non_composable_path_names_relation() {
        let text = r#"{"field": "Q", "vertices": ["a", "b"],
            "arrows": [{"name": "x", "source": "a", "target": "b", "weight": [0, 0]}],
            "relations": [[{"coeff": "1", "path": ["x", "x"]}]]}"#;
        match parse_presentation(text) {
            Err(PresentationError::NotComposable { relation, .. }) => assert_eq!(relation, 0),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn unknown_field_rejected() {
        let text = r#"{"field": "R", "vertices": [], "arrows": []}"#;
        assert!(matches!(parse_presentation(text), Err(PresentationError::Scalar(_))));
    }

    #[test]
    fn syntax_error_carries_position() {
        let text = "{\n  \"field\": \"Q\",\n  \"vertices\": [\"a\",\n}";
        match parse_presentation(text) {
            Err(PresentationError::Parse { line, .. }) => assert_eq!(line, 4),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn fractional_coefficients_over_prime_field() {
        let text = r#"{"field": "Fp:5", "vertices": ["o"],
            "arrows": [{"name": "x", "source": "o", "target": "o", "weight": [1, 0]}],
            "relations": [[{"coeff": "1/2", "path": ["x", "x"]}]]}"#;
        let p = parse_presentation(text).unwrap();
        assert_eq!(p.relations()[0].terms[0].coeff, Field::Prime(5).from_i64(3));
    }
}
