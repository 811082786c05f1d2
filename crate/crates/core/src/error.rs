use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A parameter is outside the domain of the model.
    #[error("invalid {name} = {value:e}: {reason}")]
    Domain {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    /// The linear-dispersion shift diverges at zero group index.
    #[error("CAD divergence: group index is zero, use shift_cubic")]
    CadDivergence,

    /// The linear-dispersion linewidth diverges at zero group index.
    #[error("group index is zero (white-light condition), use linewidth_cubic")]
    WhiteLightCondition,

    /// Local group index at the shifted resonance is zero.
    #[error("local group index is zero: resonance is still at the white-light point")]
    StillAtWhiteLight,

    #[error("target group index {ng_target} is infeasible for an anomalous Lorentzian medium (needs ng <= 1)")]
    InfeasibleTarget { ng_target: f64 },

    #[error("no positive root for the self-consistent linewidth equation")]
    NoPositiveRoot,

    #[error("{0} requires a Lorentzian profile")]
    NotLorentzian(&'static str),

    #[error("cubic model is only available at the profile reference frequency")]
    OffReferenceExpansion,

    #[error("expected exactly one transmission maximum in the sweep grid, found {found}")]
    ResonanceCount { found: usize },

    #[error("half maximum not bracketed within {limit:e} rad/s of the resonance")]
    HalfMaxNotBracketed { limit: f64 },

    #[error("snr {explicit:e} disagrees with photon-limited value {derived:e}")]
    InconsistentSnr { explicit: f64, derived: f64 },
}

/// Checks `value` against a predicate and produces a domain error.
pub(crate) fn ensure(ok: bool, name: &'static str, value: f64, reason: &'static str) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Error::Domain {
            name,
            value,
            reason,
        })
    }
}
