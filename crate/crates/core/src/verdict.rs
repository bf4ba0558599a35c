//! Decision outcomes shared by the class deciders.

use std::fmt;

use crate::scalar::Real;
use crate::state::LocalUnitaryPair;

/// Pipeline stage at which two invariant sets first disagree.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Stage {
    Rank,
    Spectrum,
    SingularValues,
    BModuli,
    PhaseStructure,
    DiagonalEntries,
    PathRatios,
    PhaseConsistency,
    ProjectorSpectra,
    PairTraces,
    EigenspaceTraces,
    Construction,
}

impl Stage {
    pub fn name(&self) -> &'static str {
        match self {
            Stage::Rank => "rank",
            Stage::Spectrum => "spectrum",
            Stage::SingularValues => "singular_values",
            Stage::BModuli => "b_moduli",
            Stage::PhaseStructure => "phase_structure",
            Stage::DiagonalEntries => "diagonal_entries",
            Stage::PathRatios => "path_ratios",
            Stage::PhaseConsistency => "phase_consistency",
            Stage::ProjectorSpectra => "projector_spectra",
            Stage::PairTraces => "pair_traces",
            Stage::EigenspaceTraces => "eigenspace_traces",
            Stage::Construction => "construction",
        }
    }
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// First disagreement found while comparing two states.
#[derive(Debug, Clone, PartialEq)]
pub struct FirstDiff {
    pub stage: Stage,
    pub location: String,
    /// Size of the disagreement (absolute difference or residual).
    pub magnitude: f64,
}

impl FirstDiff {
    pub fn new(stage: Stage, location: impl Into<String>, magnitude: f64) -> Self {
        Self { stage, location: location.into(), magnitude }
    }
}

impl fmt::Display for FirstDiff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} at {} (|diff| = {:.3e})", self.stage, self.location, self.magnitude)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Equivalent,
    Inequivalent,
    OutOfClass,
}

impl Verdict {
    pub fn name(&self) -> &'static str {
        match self {
            Verdict::Equivalent => "Equivalent",
            Verdict::Inequivalent => "Inequivalent",
            Verdict::OutOfClass => "OutOfClass",
        }
    }

    /// CLI exit code.
    pub fn exit_code(&self) -> i32 {
        match self {
            Verdict::Equivalent => 0,
            Verdict::Inequivalent => 1,
            Verdict::OutOfClass => 2,
        }
    }
}

/// Which classifier produced a verdict.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClassTag {
    F,
    G,
}

/// Outcome of an equivalence decision.
///
/// A witness is only ever attached after its conjugation residual on the
/// density matrices has been checked against the equality tolerance.
#[derive(Debug, Clone, PartialEq)]
pub struct EquivalenceVerdict<T: Real> {
    pub verdict: Verdict,
    pub class: Option<ClassTag>,
    /// True when the decision used caller-supplied decompositions rather
    /// than ones determined by the states.
    pub conditional: bool,
    pub first_diff: Option<FirstDiff>,
    pub out_of_class: Option<String>,
    pub witness: Option<LocalUnitaryPair<T>>,
    pub residual: Option<T>,
    pub warnings: Vec<String>,
}

impl<T: Real> EquivalenceVerdict<T> {
    pub fn equivalent(class: ClassTag, witness: LocalUnitaryPair<T>, residual: T) -> Self {
        Self {
            verdict: Verdict::Equivalent,
            class: Some(class),
            conditional: false,
            first_diff: None,
            out_of_class: None,
            witness: Some(witness),
            residual: Some(residual),
            warnings: Vec::new(),
        }
    }

    pub fn inequivalent(class: Option<ClassTag>, diff: FirstDiff) -> Self {
        Self {
            verdict: Verdict::Inequivalent,
            class,
            conditional: false,
            first_diff: Some(diff),
            out_of_class: None,
            witness: None,
            residual: None,
            warnings: Vec::new(),
        }
    }

    pub fn out_of_class(class: Option<ClassTag>, reason: impl Into<String>) -> Self {
        Self {
            verdict: Verdict::OutOfClass,
            class,
            conditional: false,
            first_diff: None,
            out_of_class: Some(reason.into()),
            witness: None,
            residual: None,
            warnings: Vec::new(),
        }
    }

    pub fn is_equivalent(&self) -> bool {
        self.verdict == Verdict::Equivalent
    }

    pub fn stage(&self) -> Option<Stage> {
        self.first_diff.as_ref().map(|d| d.stage)
    }

    pub(crate) fn with_warnings(mut self, warnings: Vec<String>) -> Self {
        self.warnings.extend(warnings);
        self
    }
}
