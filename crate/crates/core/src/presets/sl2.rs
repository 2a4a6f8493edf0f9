use crate::error::PresentationError;
use crate::presentation::{QuadraticPresentation, Quiver, Relation, Weight};
use crate::scalar::Field;

use super::Preset;

/// Basic algebra of `kC₂ ⋉ k[x,y]/(x²,y²)` with `g` acting by `-1` on `x, y`.
///
/// The idempotents `e± = (1±g)/2` give vertices `plus`, `minus`; since `x`
/// and `y` anticommute with `g`, each splits into a `plus → minus` arrow and
/// a `minus → plus` arrow.
pub struct Sl2Block;

impl Preset for Sl2Block {
    fn name(&self) -> &'static str {
        "sl2-block"
    }

    fn summary(&self) -> &'static str {
        "two vertices, arrows x±, y±; x² = y² = 0 and xy = yx through each idempotent"
    }

    fn presentation(&self, field: Field) -> Result<QuadraticPresentation, PresentationError> {
        let arrow = |n: &str, s: &str, t: &str, w: Weight| (n.to_string(), s.to_string(), t.to_string(), w);
        let q = Quiver::new(
            vec!["plus".into(), "minus".into()],
            vec![
                arrow("x+", "plus", "minus", Weight(1, 0)),
                arrow("x-", "minus", "plus", Weight(1, 0)),
                arrow("y+", "plus", "minus", Weight(0, 1)),
                arrow("y-", "minus", "plus", Weight(0, 1)),
            ],
        )?;
        let rels: [&[(i64, &str, &str)]; 6] = [
            &[(1, "x-", "x+")],
            &[(1, "x+", "x-")],
            &[(1, "y-", "y+")],
            &[(1, "y+", "y-")],
            &[(1, "x-", "y+"), (-1, "y-", "x+")],
            &[(1, "x+", "y-"), (-1, "y+", "x-")],
        ];
        let relations = rels
            .iter()
            .map(|r| Relation::from_names(&q, field, r))
            .collect::<Result<Vec<_>, _>>()?;
        QuadraticPresentation::new(q, relations, field)
    }
}
