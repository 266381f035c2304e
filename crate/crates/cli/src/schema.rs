//! The JSON surface description format.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SurfaceFile {
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub preset: Option<Preset>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gram: Option<Vec<Vec<i64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub canonical: Option<Vec<i64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub negative_curves: Vec<CurveEntry>,
    /// Enumerate (-1)-classes up to this height and add them as curves,
    /// certified when the surface is in general position. Without general
    /// position the (-2)-classes are added as uncertified candidates too.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub curve_bound: Option<u64>,
    /// Generators of the effective cone, when it is known to be polyhedral.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eff_generators: Option<Vec<Vec<i64>>>,
    #[serde(default, skip_serializing_if = "FlagsFile::is_empty")]
    pub flags: FlagsFile,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fibration: Option<FibrationFile>,
    /// Path of another surface file, relative to this one.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub relative_minimal_model: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum Preset {
    PlaneBlowup {
        points: usize,
    },
    Hirzebruch {
        n: u32,
    },
    QuarticK3Blowup {
        points: usize,
    },
    Tower {
        depth: usize,
        #[serde(default, skip_serializing_if = "VariantName::is_default")]
        variant: VariantName,
    },
    Blowup {
        base: BaseFile,
        centers: Vec<CenterFile>,
    },
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VariantName {
    #[default]
    TriplePoint,
    Node,
}

impl VariantName {
    fn is_default(&self) -> bool {
        *self == VariantName::TriplePoint
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum BaseFile {
    Plane,
    Hirzebruch { n: u32 },
    QuarticK3,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CenterFile {
    General,
    OnExceptional(usize),
    OnTwoExceptionals(usize, usize),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CurveEntry {
    pub class: Vec<i64>,
    #[serde(default)]
    pub certified: bool,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FlagsFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k_trivial: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k3_or_enriques: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub aut_finite: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub anticanonical_nef: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub minimal: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub general_position: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub anticanonical_rigid: Option<bool>,
    /// The restriction of a nef isotropic class to its curve is not torsion,
    /// so that class is nef but not semiample.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub restriction_nontorsion: Option<bool>,
}

impl FlagsFile {
    pub fn is_empty(&self) -> bool {
        *self == FlagsFile::default()
    }

    /// Sets a flag by its command-line name (dashes or underscores).
    pub fn set(&mut self, name: &str) -> Result<(), String> {
        let slot = match name.replace('-', "_").as_str() {
            "k_trivial" => &mut self.k_trivial,
            "k3_or_enriques" => &mut self.k3_or_enriques,
            "aut_finite" => &mut self.aut_finite,
            "anticanonical_nef" => &mut self.anticanonical_nef,
            "minimal" => &mut self.minimal,
            "general_position" => &mut self.general_position,
            "anticanonical_rigid" => &mut self.anticanonical_rigid,
            "restriction_nontorsion" => &mut self.restriction_nontorsion,
            _ => return Err(format!("unknown flag `{name}`")),
        };
        *slot = Some(true);
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FibrationFile {
    pub m: u32,
    #[serde(default)]
    pub fibers: Vec<String>,
}

impl SurfaceFile {
    /// Canonical serialization: sorted keys, no insignificant whitespace.
    pub fn canonical_json(&self) -> String {
        let v = serde_json::to_value(self).expect("surface files serialize");
        serde_json::to_string(&v).expect("values serialize")
    }
}
