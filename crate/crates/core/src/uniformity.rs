//! Principal entourage filters.
//!
//! On a finite carrier the filter generated by the sets `{d < eps}` over all
//! members `d` of `L(B)` is principal: its least element is the common zero
//! set, which is `Z(s)` because `s` itself is a member when `B` is proper.

use crate::error::{same_carrier, Error, Result};
use crate::maps::PointMap;
use crate::metric::PreMetricForm;
use crate::points::Relation;
use crate::structure::StructureBase;

/// The filter `{S ⊆ X×X : S ⊇ K}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PrincipalUniformity {
    kernel: Relation,
}

impl PrincipalUniformity {
    /// The kernel must be a partial equivalence relation meeting the diagonal.
    pub fn from_kernel(kernel: Relation) -> Result<Self> {
        if !kernel.is_symmetric() || !kernel.is_transitive() {
            return Err(Error::InvalidInput(
                "kernel is not symmetric and transitive".into(),
            ));
        }
        if !kernel.meets_diagonal() {
            return Err(Error::ImproperBase);
        }
        Ok(PrincipalUniformity { kernel })
    }

    pub fn len(&self) -> usize {
        self.kernel.len_points()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn kernel(&self) -> &Relation {
        &self.kernel
    }

    pub fn contains_entourage(&self, s: &Relation) -> bool {
        self.kernel.is_subset(s)
    }
}

pub fn uniformity_from_structure(b: &StructureBase) -> Result<PrincipalUniformity> {
    if !b.is_proper() {
        return Err(Error::ImproperBase);
    }
    PrincipalUniformity::from_kernel(b.zero_relation().clone())
}

pub fn contains_entourage(u: &PrincipalUniformity, s: &Relation) -> bool {
    u.contains_entourage(s)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UcVerdict {
    Holds,
    /// `pair ∈ K_X` but `image = (f x1, f x2) ∉ K_Y`.
    Fails {
        pair: (usize, usize),
        image: (usize, usize),
    },
}

impl UcVerdict {
    pub fn holds(self) -> bool {
        self == UcVerdict::Holds
    }
}

/// Every entourage of `uy` pulls back into `ux` iff the least one does:
/// `(f × f)(K_X) ⊆ K_Y`.
pub fn is_uc_map(
    f: &PointMap,
    ux: &PrincipalUniformity,
    uy: &PrincipalUniformity,
) -> Result<UcVerdict> {
    same_carrier(ux.len(), f.source_len())?;
    same_carrier(uy.len(), f.target_len())?;
    let bad = ux
        .kernel
        .pairs()
        .map(|(a, b)| ((a, b), (f.apply(a), f.apply(b))))
        .find(|&(_, (fa, fb))| !uy.kernel.contains(fa, fb));
    Ok(match bad {
        Some((pair, image)) => UcVerdict::Fails { pair, image },
        None => UcVerdict::Holds,
    })
}

/// Largest target on which [`is_uc_map_by_entourages`] runs.
pub const ENTOURAGE_ORACLE_MAX: usize = 3;

/// Definition-level check: the preimage of every superset of `K_Y` contains `K_X`.
pub fn is_uc_map_by_entourages(
    f: &PointMap,
    ux: &PrincipalUniformity,
    uy: &PrincipalUniformity,
) -> Result<bool> {
    same_carrier(ux.len(), f.source_len())?;
    same_carrier(uy.len(), f.target_len())?;
    let m = uy.len();
    if m > ENTOURAGE_ORACLE_MAX {
        return Err(Error::TooLarge(format!("entourage oracle on {m} points")));
    }
    let cells = m * m;
    let all_ok = (0..1u32 << cells).all(|mask| {
        let s = Relation::from_fn(m, |i, j| (mask >> (i * m + j)) & 1 == 1);
        if !uy.contains_entourage(&s) {
            return true;
        }
        let pre = Relation::from_fn(ux.len(), |a, b| s.contains(f.apply(a), f.apply(b)));
        ux.contains_entourage(&pre)
    });
    Ok(all_ok)
}

/// `{d < eps}` is an entourage for every `eps > 0` iff `d` vanishes on `K`.
pub fn is_uc_metric(d: &PreMetricForm, u: &PrincipalUniformity) -> Result<bool> {
    same_carrier(u.len(), d.len())?;
    Ok(u.kernel.pairs().all(|(a, b)| d.get(a, b).is_zero()))
}

/// Kernel `K_X × K_Y` on the row-major product carrier; the least uniformity
/// making both projections uniformly continuous.
pub fn product_uniformity(
    ux: &PrincipalUniformity,
    uy: &PrincipalUniformity,
) -> PrincipalUniformity {
    PrincipalUniformity {
        kernel: ux.kernel.product(&uy.kernel),
    }
}
