use crate::error::PresentationError;
use crate::presentation::{QuadraticPresentation, Quiver, Relation, Weight};
use crate::scalar::Field;

use super::Preset;

/// `k[x]/(x²)` as a one-vertex quiver with a loop.
pub struct DualNumbers;

impl Preset for DualNumbers {
    fn name(&self) -> &'static str {
        "dual-numbers"
    }

    fn summary(&self) -> &'static str {
        "one vertex, one loop x, relation x·x"
    }

    fn presentation(&self, field: Field) -> Result<QuadraticPresentation, PresentationError> {
        let q = Quiver::new(
            vec!["o".into()],
            vec![("x".into(), "o".into(), "o".into(), Weight(1, 0))],
        )?;
        let r = Relation::from_names(&q, field, &[(1, "x", "x")])?;
        QuadraticPresentation::new(q, vec![r], field)
    }
}
