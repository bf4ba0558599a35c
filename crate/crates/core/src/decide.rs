//! Class-agnostic entry point: class F first, then class G.

use crate::class_f::{decide_equivalence_f, DecideOptions};
use crate::class_g::decide_equivalence_g;
use crate::error::Result;
use crate::scalar::Real;
use crate::state::DensityMatrix;
use crate::tolerance::Tolerances;
use crate::verdict::{EquivalenceVerdict, Verdict};

/// Tries the class-F decider and falls back to class G when the states are
/// outside F. Out-of-class reasons from both attempts are kept.
pub fn decide_auto<T: Real>(
    a: &DensityMatrix<T>,
    b: &DensityMatrix<T>,
    opts: &DecideOptions,
    tol: &Tolerances<T>,
) -> Result<EquivalenceVerdict<T>> {
    let f = decide_equivalence_f(a, b, opts, tol)?;
    if f.verdict != Verdict::OutOfClass {
        return Ok(f);
    }
    let g = decide_equivalence_g(a, b, None, tol)?;
    if g.verdict != Verdict::OutOfClass {
        return Ok(g.with_warnings(vec![format!(
            "outside class F: {}",
            f.out_of_class.clone().unwrap_or_default()
        )]));
    }
    let reason = format!(
        "F: {}; G: {}",
        f.out_of_class.unwrap_or_default(),
        g.out_of_class.unwrap_or_default()
    );
    Ok(EquivalenceVerdict::out_of_class(None, reason))
}
