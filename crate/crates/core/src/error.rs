use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SdwError {
    #[error("epsilon must be positive, got {0}")]
    NonPositiveEpsilon(f64),
    #[error("window is empty: x_max = {x_max} is not to the right of R = {r}")]
    EmptyWindow { r: f64, x_max: f64 },
    #[error("spacing constant C must be at least 1, got {0}")]
    BadSpacingConstant(f64),
    #[error("cube-root spacing {spacing} exceeds the window length {length}")]
    EpsilonTooLarge { spacing: f64, length: f64 },
    #[error("partition spacing {gap} at x = {at} violates bounds [{lo}, {hi}]")]
    SpacingBounds { gap: f64, at: f64, lo: f64, hi: f64 },
    #[error("density must be positive, got {rho} at x = {x}")]
    NonPositiveDensity { x: f64, rho: f64 },
    #[error("invalid state: {0}")]
    InvalidState(String),
    #[error("invalid profile: {0}")]
    InvalidProfile(String),
    #[error("time {t} precedes the birth time {t0}")]
    BeforeBirth { t: f64, t0: f64 },
    #[error("x = {x} lies outside the vacuum fan [{lo}, {hi}]")]
    OutsideFan { x: f64, lo: f64, hi: f64 },
    #[error("operation requires the 3x3 system (internal energy missing)")]
    EnergyMissing,
    #[error("initial speed {c0} outside [{u_r}, {u_l}]")]
    NotOvercompressive { c0: f64, u_l: f64, u_r: f64 },
    #[error("interaction has no admissible outgoing wave: {0}")]
    Inadmissible(String),
    #[error("fronts are not adjacent: {0}")]
    NotAdjacent(String),
    #[error("invariant breached: {0}")]
    Invariant(String),
    #[error("time {t} is past the life span {t_max}")]
    PastLifeSpan { t: f64, t_max: f64 },
    #[error("point x = {x} at t = {t} is not in the classical region")]
    NotClassical { x: f64, t: f64 },
    #[error("time {t} is outside the evolved horizon [0, {horizon}]")]
    OutsideHorizon { t: f64, horizon: f64 },
    #[error("window [{lo}, {hi}] does not contain front at x = {x}")]
    WindowTooSmall { lo: f64, hi: f64, x: f64 },
    #[error("test function support is not admissible: {0}")]
    BadTestFunction(String),
    #[error("curves do not share an anchor: {0} vs {1}")]
    AnchorMismatch(f64, f64),
    #[error("refinement violates the equidistant bounds: {0}")]
    Refinement(String),
    #[error("no front starts at the junction R")]
    NoJunctionFront,
}

pub type Result<T> = std::result::Result<T, SdwError>;
