//! Turning surface files into validated [`SurfaceData`].

use std::path::{Path, PathBuf};

use coxsurf_core::classify::{Fibration, SurfaceData, SurfaceFlags};
use coxsurf_core::negative::{self, CurveClass, DynkinType};
use coxsurf_core::surface::{Base, BlowupSpec, Center};
use coxsurf_core::tower::{self, TowerVariant};
use coxsurf_core::{DivisorClass, IntersectionLattice};
use sha2::{Digest, Sha256};

use crate::corpus;
use crate::schema::{BaseFile, CenterFile, Preset, SurfaceFile, VariantName};

const MAX_MODEL_DEPTH: usize = 8;

#[derive(Debug, thiserror::Error)]
pub enum InputError {
    #[error("{origin}: {source}")]
    Io { origin: String, source: std::io::Error },
    #[error("{origin}:{line}:{column}: {message}")]
    Syntax { origin: String, line: usize, column: usize, message: String },
    #[error("{origin}: {message}")]
    Invalid { origin: String, message: String },
}

impl InputError {
    fn invalid(origin: &str, message: impl Into<String>) -> Self {
        InputError::Invalid { origin: origin.to_string(), message: message.into() }
    }
}

#[derive(Debug, Clone)]
pub struct LoadedSurface {
    pub origin: String,
    pub file: SurfaceFile,
    pub data: SurfaceData,
    pub labels: Vec<String>,
    pub spec: Option<BlowupSpec>,
    /// Pulled-back fiber class for tower presets.
    pub tower_fiber: Option<DivisorClass>,
    /// Hex SHA-256 of the canonical serialization of `file`.
    pub digest: String,
}

/// Where a surface file was read from; relative model references resolve
/// against it.
#[derive(Debug, Clone)]
enum Source {
    Path(PathBuf),
    Corpus(String),
}

impl Source {
    fn origin(&self) -> String {
        match self {
            Source::Path(p) => p.display().to_string(),
            Source::Corpus(n) => format!("corpus:{n}"),
        }
    }

    fn resolve(&self, reference: &str) -> Source {
        if let Source::Path(p) = self {
            let candidate = p.parent().unwrap_or(Path::new(".")).join(reference);
            if candidate.exists() {
                return Source::Path(candidate);
            }
        }
        Source::Corpus(reference.to_string())
    }

    fn read(&self) -> Result<String, InputError> {
        match self {
            Source::Path(p) => {
                std::fs::read_to_string(p).map_err(|e| InputError::Io { origin: self.origin(), source: e })
            }
            Source::Corpus(n) => corpus::get(n).map(str::to_string).ok_or_else(|| InputError::Io {
                origin: self.origin(),
                source: std::io::Error::new(std::io::ErrorKind::NotFound, "no such file or corpus entry"),
            }),
        }
    }
}

/// Reads a surface file from `path`, falling back to the bundled corpus when
/// no such file exists.
pub fn parse_surface(path: &str) -> Result<LoadedSurface, InputError> {
    let p = Path::new(path);
    let source = if p.exists() { Source::Path(p.to_path_buf()) } else { Source::Corpus(path.to_string()) };
    load(&source, 0)
}

/// Builds an already parsed (possibly edited) file, resolving model
/// references as [`parse_surface`] would for `path`.
pub fn parse_surface_from(file: SurfaceFile, path: &str) -> Result<LoadedSurface, InputError> {
    let p = Path::new(path);
    let source = if p.exists() { Source::Path(p.to_path_buf()) } else { Source::Corpus(path.to_string()) };
    let origin = source.origin();
    build(file, &source, &origin, 0)
}

/// Parses surface JSON held in memory. Model references go to the corpus.
pub fn parse_surface_str(text: &str, origin: &str) -> Result<LoadedSurface, InputError> {
    let file = parse_file(text, origin)?;
    build(file, &Source::Corpus(origin.to_string()), origin, 0)
}

pub fn parse_file(text: &str, origin: &str) -> Result<SurfaceFile, InputError> {
    serde_json::from_str(text).map_err(|e| InputError::Syntax {
        origin: origin.to_string(),
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })
}

pub fn digest(file: &SurfaceFile) -> String {
    let hash = Sha256::digest(file.canonical_json().as_bytes());
    hash.iter().map(|b| format!("{b:02x}")).collect()
}

fn load(source: &Source, depth: usize) -> Result<LoadedSurface, InputError> {
    let origin = source.origin();
    let text = source.read()?;
    let file = parse_file(&text, &origin)?;
    build(file, source, &origin, depth)
}

struct Built {
    lattice: IntersectionLattice,
    labels: Vec<String>,
    spec: Option<BlowupSpec>,
    extra_curves: Vec<CurveClass>,
    tower_fiber: Option<DivisorClass>,
}

fn build_lattice(file: &SurfaceFile, origin: &str) -> Result<Built, InputError> {
    let invalid = |m: String| InputError::invalid(origin, m);
    let from_spec = |spec: BlowupSpec| -> Result<Built, InputError> {
        let (lattice, labels) = spec.build_lattice().map_err(|e| invalid(e.to_string()))?;
        Ok(Built { lattice, labels, spec: Some(spec), extra_curves: Vec::new(), tower_fiber: None })
    };
    match (&file.preset, &file.gram, &file.canonical) {
        (Some(_), Some(_), _) | (Some(_), _, Some(_)) => {
            Err(invalid("give either a preset or gram and canonical, not both".into()))
        }
        (None, Some(gram), Some(canonical)) => {
            let lattice = IntersectionLattice::new(gram.clone(), canonical.clone()).map_err(|e| invalid(e.to_string()))?;
            let lattice = if lattice.rank() >= 2 {
                lattice.require_hyperbolic().map_err(|e| invalid(e.to_string()))?
            } else {
                lattice
            };
            let rational = !file.flags.k_trivial.unwrap_or(false);
            let labels = (0..lattice.rank()).map(|i| format!("e{i}")).collect();
            Ok(Built {
                lattice: lattice.with_rational_surface(rational),
                labels,
                spec: None,
                extra_curves: Vec::new(),
                tower_fiber: None,
            })
        }
        (None, _, _) => Err(invalid("missing preset, or gram and canonical".into())),
        (Some(preset), None, None) => match preset {
            Preset::PlaneBlowup { points } => from_spec(BlowupSpec::plane(*points)),
            Preset::Hirzebruch { n } => from_spec(BlowupSpec::hirzebruch(*n)),
            Preset::QuarticK3Blowup { points } => {
                if *points > 1 {
                    return Err(invalid("a quartic K3 base admits at most one center".into()));
                }
                from_spec(BlowupSpec::quartic(*points))
            }
            Preset::Blowup { base, centers } => {
                let base = match base {
                    BaseFile::Plane => Base::Plane,
                    BaseFile::Hirzebruch { n } => Base::Hirzebruch(*n),
                    BaseFile::QuarticK3 => Base::QuarticK3,
                };
                let centers = centers
                    .iter()
                    .map(|c| match c {
                        CenterFile::General => Center::General,
                        CenterFile::OnExceptional(j) => Center::OnExceptional(*j),
                        CenterFile::OnTwoExceptionals(j, k) => Center::OnTwoExceptionals(*j, *k),
                    })
                    .collect();
                let spec = BlowupSpec::new(base, centers).map_err(|e| invalid(e.to_string()))?;
                from_spec(spec)
            }
            Preset::Tower { depth, variant } => {
                let variant = match variant {
                    VariantName::TriplePoint => TowerVariant::TriplePoint,
                    VariantName::Node => TowerVariant::Node,
                };
                let t = tower::tower_surface(variant, *depth).map_err(|e| invalid(e.to_string()))?;
                let (_, labels) = t.spec.build_lattice().map_err(|e| invalid(e.to_string()))?;
                Ok(Built {
                    lattice: t.lattice,
                    labels,
                    spec: Some(t.spec),
                    extra_curves: t.candidates,
                    tower_fiber: Some(t.fiber),
                })
            }
        },
    }
}

fn build(file: SurfaceFile, source: &Source, origin: &str, depth: usize) -> Result<LoadedSurface, InputError> {
    let invalid = |m: String| InputError::invalid(origin, m);
    let built = build_lattice(&file, origin)?;
    let lattice = built.lattice;
    let rank = lattice.rank();

    let labels = match &file.labels {
        Some(l) if l.len() != rank => return Err(invalid(format!("{} labels for rank {rank}", l.len()))),
        Some(l) => l.clone(),
        None => built.labels,
    };

    let general = file.flags.general_position.unwrap_or(false);
    let mut curves: Vec<CurveClass> = Vec::new();
    for (i, entry) in file.negative_curves.iter().enumerate() {
        if entry.class.len() != rank {
            return Err(invalid(format!("negative_curves[{i}] has {} entries, rank is {rank}", entry.class.len())));
        }
        let c = CurveClass::new(&lattice, DivisorClass::from_ints(&entry.class), entry.certified)
            .map_err(|e| invalid(format!("negative_curves[{i}]: {e}")))?;
        if c.self_int >= 0 {
            return Err(invalid(format!("negative_curves[{i}] has self-intersection {}", c.self_int)));
        }
        curves.push(c);
    }
    curves.extend(built.extra_curves);
    if let Some(bound) = file.curve_bound {
        for d in negative::minus_one_classes(&lattice, bound) {
            curves.push(CurveClass::new(&lattice, d, general).map_err(|e| invalid(e.to_string()))?);
        }
        if !general {
            for d in negative::minus_two_classes(&lattice, bound) {
                curves.push(CurveClass::new(&lattice, d, false).map_err(|e| invalid(e.to_string()))?);
            }
        }
    }
    // One entry per class; certification wins.
    curves.sort_by(|a, b| a.class.cmp(&b.class).then(b.effective_certified.cmp(&a.effective_certified)));
    curves.dedup_by(|a, b| a.class == b.class);

    let eff_generators = match &file.eff_generators {
        None => None,
        Some(gens) => {
            let mut out = Vec::with_capacity(gens.len());
            for (i, g) in gens.iter().enumerate() {
                if g.len() != rank {
                    return Err(invalid(format!("eff_generators[{i}] has {} entries, rank is {rank}", g.len())));
                }
                if g.iter().all(|&x| x == 0) {
                    return Err(invalid(format!("eff_generators[{i}] is zero")));
                }
                out.push(DivisorClass::from_ints(g));
            }
            Some(out)
        }
    };

    let f = &file.flags;
    let flags = SurfaceFlags {
        k_trivial: f.k_trivial.unwrap_or(false),
        k3_or_enriques: f.k3_or_enriques,
        aut_finite: f.aut_finite,
        anticanonical_nef: f.anticanonical_nef,
        minimal: f.minimal.unwrap_or(false),
        general_position: general,
        anticanonical_rigid: f.anticanonical_rigid,
        nef_not_semiample: f.restriction_nontorsion.unwrap_or(false),
    };

    let fibration = match &file.fibration {
        None => None,
        Some(fib) => {
            let mut fibers = Vec::with_capacity(fib.fibers.len());
            for (i, label) in fib.fibers.iter().enumerate() {
                let t: DynkinType = label.parse().map_err(|_| invalid(format!("fibration.fibers[{i}]: bad label `{label}`")))?;
                if !t.extended {
                    return Err(invalid(format!("fibration.fibers[{i}]: `{label}` is not an extended type")));
                }
                fibers.push(t);
            }
            Some(Fibration { m: fib.m, fibers })
        }
    };

    let relative_minimal_model = match &file.relative_minimal_model {
        None => None,
        Some(_) if depth >= MAX_MODEL_DEPTH => {
            return Err(invalid("relative_minimal_model references nest too deeply".into()))
        }
        Some(reference) => Some(Box::new(load(&source.resolve(reference), depth + 1)?.data)),
    };

    let data = SurfaceData {
        name: file.name.clone(),
        lattice,
        negative_curves: curves,
        eff_generators,
        flags,
        fibration,
        relative_minimal_model,
    };
    data.check().map_err(|e| invalid(e.to_string()))?;
    Ok(LoadedSurface {
        origin: origin.to_string(),
        digest: digest(&file),
        file,
        data,
        labels,
        spec: built.spec,
        tower_fiber: built.tower_fiber,
    })
}
