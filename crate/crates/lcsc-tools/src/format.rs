//! JSON documents for categories and amalgams.

use lcsc_core::amalgam::{Amalgam, AmalgamError};
use lcsc_core::category::StructureError;
use lcsc_core::{CategoryBuilder, SmallCategory, Totality};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    #[default]
    Total,
    Bounded,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MorphismSpec {
    pub id: String,
    pub src: String,
    pub dst: String,
}

/// `{objects, morphisms, compose: [[a, b, ab], ...], mode, bound}`.
/// Identities share their object's id and need not be listed.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CategorySpec {
    pub objects: Vec<String>,
    #[serde(default)]
    pub morphisms: Vec<MorphismSpec>,
    #[serde(default)]
    pub compose: Vec<[String; 3]>,
    #[serde(default)]
    pub mode: Mode,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bound: Option<usize>,
}

impl CategorySpec {
    pub fn build(&self) -> Result<SmallCategory, StructureError> {
        let mut b = CategoryBuilder::new();
        for o in &self.objects {
            b.object(o);
        }
        for m in &self.morphisms {
            let src = b.lookup_object(&m.src).ok_or_else(|| StructureError::UnknownId(m.src.clone()))?;
            let dst = b.lookup_object(&m.dst).ok_or_else(|| StructureError::UnknownId(m.dst.clone()))?;
            b.morphism(&m.id, src, dst);
        }
        for [a, c, ac] in &self.compose {
            b.compose_ids(a, c, ac);
        }
        let totality = match self.mode {
            Mode::Total => Totality::Total,
            Mode::Bounded => Totality::Bounded(self.bound.unwrap_or(0)),
        };
        b.build(totality)
    }

    /// Writes out every non-identity morphism and every composite that is
    /// not an identity law.
    pub fn from_category(cat: &SmallCategory) -> Self {
        let objects = cat.objects().map(|o| cat.object_name(o).to_string()).collect();
        let morphisms = cat
            .morphisms()
            .filter(|&m| !cat.is_identity(m))
            .map(|m| MorphismSpec {
                id: cat.name(m).to_string(),
                src: cat.object_name(cat.src(m)).to_string(),
                dst: cat.object_name(cat.dst(m)).to_string(),
            })
            .collect();
        let compose = cat
            .composition_entries()
            .into_iter()
            .map(|(a, b, ab)| [cat.name(a).to_string(), cat.name(b).to_string(), cat.name(ab).to_string()])
            .collect();
        let (mode, bound) = match cat.totality() {
            Totality::Total => (Mode::Total, None),
            Totality::Bounded(n) => (Mode::Bounded, Some(n)),
        };
        CategorySpec {
            objects,
            morphisms,
            compose,
            mode,
            bound,
        }
    }
}

/// `{components: [CategorySpec, ...], identify: [[[component, object], ...], ...]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AmalgamSpec {
    pub components: Vec<CategorySpec>,
    #[serde(default)]
    pub identify: Vec<Vec<(usize, String)>>,
}

#[derive(Debug, thiserror::Error)]
pub enum AmalgamSpecError {
    #[error("component {0}: {1}")]
    Component(usize, StructureError),
    #[error("component {0} has no object `{1}`")]
    UnknownObject(usize, String),
    #[error(transparent)]
    Amalgam(#[from] AmalgamError),
}

impl AmalgamSpec {
    pub fn build(&self) -> Result<Amalgam, AmalgamSpecError> {
        let comps = self
            .components
            .iter()
            .enumerate()
            .map(|(i, c)| c.build().map_err(|e| AmalgamSpecError::Component(i, e)))
            .collect::<Result<Vec<_>, _>>()?;
        let mut blocks = Vec::with_capacity(self.identify.len());
        for block in &self.identify {
            let mut b = Vec::with_capacity(block.len());
            for (c, o) in block {
                let obj = comps
                    .get(*c)
                    .and_then(|cat| cat.lookup_object(o))
                    .ok_or_else(|| AmalgamSpecError::UnknownObject(*c, o.clone()))?;
                b.push((*c, obj));
            }
            blocks.push(b);
        }
        Ok(Amalgam::new(comps, &blocks)?)
    }
}

/// Either document, told apart by the `components` key.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Document {
    Amalgam(AmalgamSpec),
    Category(CategorySpec),
}
