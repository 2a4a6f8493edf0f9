//! Built-in presentations, selected by name at runtime.

mod dual_numbers;
mod sl2;
mod sl3;

use crate::algebra::{AlgebraElement, GradedAlgebra};
use crate::error::{AlgebraError, Error, PresentationError};
use crate::presentation::{QuadraticPresentation, Weight};
use crate::scalar::Field;

pub use dual_numbers::DualNumbers;
pub use sl2::Sl2Block;
pub use sl3::{arrow_name, Sl3Block, ROOT_INDEX};

/// `(coefficient, arrows in written order)`; an empty path is the idempotent
/// of the summand's vertex.
pub type PathTerm = (i64, Vec<String>);

/// Element of a free module `⊕ Λe_v[shift]`: `(summand, coefficient, path)`.
pub type FreeTerm = (usize, i64, Vec<String>);

#[derive(Clone, Debug)]
pub struct NamedElement {
    pub name: &'static str,
    pub terms: Vec<PathTerm>,
}

#[derive(Clone, Debug)]
pub struct SummandSpec {
    pub vertex: &'static str,
    pub shift: i64,
    pub weight: Weight,
}

/// `(⊕ Λe_v[shift]) / Λ·relations`.
#[derive(Clone, Debug)]
pub struct ModuleSpec {
    pub name: &'static str,
    pub summands: Vec<SummandSpec>,
    pub relations: Vec<Vec<FreeTerm>>,
}

/// Module map given by the images of the source generators, written as
/// elements of the target's free cover.
#[derive(Clone, Debug)]
pub struct MapSpec {
    pub name: &'static str,
    pub source: &'static str,
    pub target: &'static str,
    pub images: Vec<Vec<FreeTerm>>,
}

/// `0 → modules[0] → … → modules[n] → 0` with the listed maps.
#[derive(Clone, Debug)]
pub struct SequenceSpec {
    pub name: &'static str,
    pub maps: Vec<MapSpec>,
}

pub trait Preset: Send + Sync {
    fn name(&self) -> &'static str;

    fn summary(&self) -> &'static str;

    fn presentation(&self, field: Field) -> Result<QuadraticPresentation, PresentationError>;

    fn named_elements(&self) -> Vec<NamedElement> {
        Vec::new()
    }

    fn modules(&self) -> Vec<ModuleSpec> {
        Vec::new()
    }

    fn sequences(&self) -> Vec<SequenceSpec> {
        Vec::new()
    }

    /// F-side data for an sl₃ action on the arrows, when the preset has one.
    fn lowering_operators(&self) -> Option<crate::lie::LoweringData> {
        None
    }

    /// Vectors of `V ⊗ V` whose sl₃-submodule should be the relation
    /// space, as `(coefficient, x, y)` for the word `x·y`.
    fn relation_generators(&self) -> Vec<Vec<(i64, String, String)>> {
        Vec::new()
    }

    fn module(&self, name: &str) -> Option<ModuleSpec> {
        self.modules().into_iter().find(|m| m.name == name)
    }
}

/// Normal form of a named element in `alg`.
pub fn build_named(alg: &GradedAlgebra, e: &NamedElement) -> Result<AlgebraElement, AlgebraError> {
    let words: Vec<Vec<&str>> = e.terms.iter().map(|(_, p)| p.iter().map(String::as_str).collect()).collect();
    let terms: Vec<(i64, &[&str])> = e.terms.iter().zip(&words).map(|((c, _), w)| (*c, w.as_slice())).collect();
    alg.combination(&terms)
}

pub fn registry() -> Vec<Box<dyn Preset>> {
    vec![Box::new(Sl3Block), Box::new(Sl2Block), Box::new(DualNumbers)]
}

pub fn names() -> Vec<&'static str> {
    registry().iter().map(|p| p.name()).collect()
}

pub fn find(name: &str) -> Result<Box<dyn Preset>, Error> {
    registry()
        .into_iter()
        .find(|p| p.name() == name)
        .ok_or_else(|| Error::UnknownPreset(name.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn registry_lookup() {
        assert_eq!(names(), vec!["sl3-block", "sl2-block", "dual-numbers"]);
        assert!(matches!(find("nope"), Err(Error::UnknownPreset(_))));
    }

    #[test]
    fn sl3_relation_blocks() {
        let p = Sl3Block.presentation(Field::Rationals).unwrap();
        assert_eq!(p.relations().len(), 36);
        assert_eq!(p.quiver().num_arrows(), 12);
        assert!(p.is_weight_homogeneous().homogeneous);
        let dims: Vec<usize> = p.relation_block_dims().values().copied().collect();
        assert_eq!(dims.iter().sum::<usize>(), 36);
    }

    #[test]
    fn sl3_degree_dims() {
        let p = Sl3Block.presentation(Field::Rationals).unwrap();
        let a = GradedAlgebra::build(&p, 6).unwrap();
        assert_eq!(a.degree_dims(), vec![3, 12, 18, 12, 3, 0]);
    }

    #[test]
    fn sl2_degree_dims() {
        let p = Sl2Block.presentation(Field::Rationals).unwrap();
        let a = GradedAlgebra::build(&p, 6).unwrap();
        assert_eq!(a.degree_dims(), vec![2, 4, 2, 0]);
    }
}
