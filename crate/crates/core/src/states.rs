//! Fluid states, initial profiles, partitions and sampled cell states.

use crate::error::{Result, SdwError};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FluidState {
    pub rho: f64,
    pub u: f64,
    /// Specific internal energy; present only in the 3x3 system.
    pub e: Option<f64>,
}

impl FluidState {
    pub fn new(rho: f64, u: f64) -> Self {
        FluidState { rho, u, e: None }
    }

    pub fn with_energy(rho: f64, u: f64, e: f64) -> Self {
        FluidState { rho, u, e: Some(e) }
    }

    /// Vacuum state carrying a placeholder velocity.
    pub fn vacuum(u: f64) -> Self {
        FluidState { rho: 0.0, u, e: None }
    }

    pub fn is_vacuum(&self) -> bool {
        self.rho == 0.0
    }

    pub fn momentum(&self) -> f64 {
        self.rho * self.u
    }

    /// Total energy density rho (u^2/2 + e); kinetic only in the 2x2 system.
    pub fn energy_density(&self) -> f64 {
        self.rho * (0.5 * self.u * self.u + self.e.unwrap_or(0.0))
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.rho >= 0.0) || !self.rho.is_finite() || !self.u.is_finite() {
            return Err(SdwError::InvalidState(format!("{self:?}")));
        }
        if let Some(e) = self.e {
            if !(e >= 0.0) || !e.is_finite() {
                return Err(SdwError::InvalidState(format!("negative internal energy {e}")));
            }
        }
        Ok(())
    }
}

/// Piecewise cubic Hermite interpolant with Fritsch-Carlson slopes.
#[derive(Debug, Clone, PartialEq)]
pub struct MonotoneCubic {
    xs: Vec<f64>,
    ys: Vec<f64>,
    ms: Vec<f64>,
}

impl MonotoneCubic {
    pub fn new(xs: Vec<f64>, ys: Vec<f64>) -> Result<Self> {
        if xs.len() < 2 || xs.len() != ys.len() {
            return Err(SdwError::InvalidProfile("table needs at least two (x, y) rows".into()));
        }
        if xs.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(SdwError::InvalidProfile("table abscissae must increase strictly".into()));
        }
        let n = xs.len();
        let d: Vec<f64> = (0..n - 1).map(|i| (ys[i + 1] - ys[i]) / (xs[i + 1] - xs[i])).collect();
        let mut ms = vec![0.0; n];
        ms[0] = d[0];
        ms[n - 1] = d[n - 2];
        for i in 1..n - 1 {
            ms[i] = if d[i - 1] * d[i] <= 0.0 { 0.0 } else { 0.5 * (d[i - 1] + d[i]) };
        }
        for i in 0..n - 1 {
            if d[i] == 0.0 {
                ms[i] = 0.0;
                ms[i + 1] = 0.0;
                continue;
            }
            let a = ms[i] / d[i];
            let b = ms[i + 1] / d[i];
            let s = a * a + b * b;
            if s > 9.0 {
                let tau = 3.0 / s.sqrt();
                ms[i] = tau * a * d[i];
                ms[i + 1] = tau * b * d[i];
            }
        }
        Ok(MonotoneCubic { xs, ys, ms })
    }

    pub fn nodes(&self) -> (&[f64], &[f64]) {
        (&self.xs, &self.ys)
    }

    fn locate(&self, x: f64) -> Option<usize> {
        let n = self.xs.len();
        if x <= self.xs[0] || x >= self.xs[n - 1] {
            return None;
        }
        Some(self.xs.partition_point(|&v| v <= x) - 1)
    }

    pub fn value(&self, x: f64) -> f64 {
        let n = self.xs.len();
        match self.locate(x) {
            None if x <= self.xs[0] => self.ys[0],
            None => self.ys[n - 1],
            Some(i) => {
                let h = self.xs[i + 1] - self.xs[i];
                let t = (x - self.xs[i]) / h;
                let t2 = t * t;
                let t3 = t2 * t;
                (2.0 * t3 - 3.0 * t2 + 1.0) * self.ys[i]
                    + (t3 - 2.0 * t2 + t) * h * self.ms[i]
                    + (-2.0 * t3 + 3.0 * t2) * self.ys[i + 1]
                    + (t3 - t2) * h * self.ms[i + 1]
            }
        }
    }

    pub fn derivative(&self, x: f64) -> f64 {
        match self.locate(x) {
            None => 0.0,
            Some(i) => {
                let h = self.xs[i + 1] - self.xs[i];
                let t = (x - self.xs[i]) / h;
                let t2 = t * t;
                ((6.0 * t2 - 6.0 * t) * self.ys[i]
                    + (3.0 * t2 - 4.0 * t + 1.0) * h * self.ms[i]
                    + (-6.0 * t2 + 6.0 * t) * self.ys[i + 1]
                    + (3.0 * t2 - 2.0 * t) * h * self.ms[i + 1])
                    / h
            }
        }
    }
}

/// Initial profile for x > R: a catalog entry or a dense tabulation.
#[derive(Debug, Clone, PartialEq)]
pub enum Profile {
    Constant(f64),
    /// a + b x
    Linear { a: f64, b: f64 },
    /// Continuous piecewise linear through knots, constant outside them.
    AffineByParts { knots: Vec<(f64, f64)> },
    /// base + amplitude * tanh((x - center) / width)
    TanhRamp { base: f64, amplitude: f64, center: f64, width: f64 },
    Table(MonotoneCubic),
}

impl Profile {
    pub fn validate(&self) -> Result<()> {
        match self {
            Profile::AffineByParts { knots } => {
                if knots.is_empty() || knots.windows(2).any(|w| !(w[1].0 > w[0].0)) {
                    return Err(SdwError::InvalidProfile(
                        "affine knots must be non-empty with increasing x".into(),
                    ));
                }
            }
            Profile::TanhRamp { width, .. } if !(*width > 0.0) => {
                return Err(SdwError::InvalidProfile("tanh width must be positive".into()));
            }
            _ => {}
        }
        Ok(())
    }

    pub fn value(&self, x: f64) -> f64 {
        match self {
            Profile::Constant(c) => *c,
            Profile::Linear { a, b } => a + b * x,
            Profile::AffineByParts { knots } => {
                let n = knots.len();
                if x <= knots[0].0 {
                    return knots[0].1;
                }
                if x >= knots[n - 1].0 {
                    return knots[n - 1].1;
                }
                let i = knots.partition_point(|k| k.0 <= x) - 1;
                let (x0, y0) = knots[i];
                let (x1, y1) = knots[i + 1];
                y0 + (y1 - y0) * (x - x0) / (x1 - x0)
            }
            Profile::TanhRamp { base, amplitude, center, width } => {
                base + amplitude * ((x - center) / width).tanh()
            }
            Profile::Table(m) => m.value(x),
        }
    }

    /// Derivative; at affine kinks the right derivative is returned.
    pub fn derivative(&self, x: f64) -> f64 {
        match self {
            Profile::Constant(_) => 0.0,
            Profile::Linear { b, .. } => *b,
            Profile::AffineByParts { knots } => {
                let n = knots.len();
                if n < 2 || x < knots[0].0 || x >= knots[n - 1].0 {
                    return 0.0;
                }
                let i = knots.partition_point(|k| k.0 <= x) - 1;
                (knots[i + 1].1 - knots[i].1) / (knots[i + 1].0 - knots[i].0)
            }
            Profile::TanhRamp { amplitude, center, width, .. } => {
                let s = 1.0 / ((x - center) / width).cosh();
                amplitude * s * s / width
            }
            Profile::Table(m) => m.derivative(x),
        }
    }

    /// Interior points in (lo, hi) where the profile switches monotonicity.
    pub fn extrema(&self, lo: f64, hi: f64) -> Vec<f64> {
        let nodes: Vec<(f64, f64)> = match self {
            Profile::AffineByParts { knots } => knots.clone(),
            Profile::Table(m) => m.xs.iter().copied().zip(m.ys.iter().copied()).collect(),
            _ => return Vec::new(),
        };
        let mut out = Vec::new();
        let mut last_sign = 0.0;
        let mut candidate: Option<f64> = None;
        for w in nodes.windows(2) {
            let d = w[1].1 - w[0].1;
            if d == 0.0 {
                continue;
            }
            let s = d.signum();
            if last_sign != 0.0 && s != last_sign {
                if let Some(x) = candidate {
                    if x > lo && x < hi {
                        out.push(x);
                    }
                }
            }
            last_sign = s;
            candidate = Some(w[1].0);
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct InitialData {
    /// Constant state (rho0, u0[, e0]) for x <= R.
    pub left: FluidState,
    pub r: f64,
    pub rho: Profile,
    pub u: Profile,
    /// Internal energy profile; present iff the run is in 3x3 mode.
    pub e: Option<Profile>,
    pub x_max: f64,
}

impl InitialData {
    pub fn new(left: FluidState, r: f64, rho: Profile, u: Profile, x_max: f64) -> Self {
        InitialData { left, r, rho, u, e: None, x_max }
    }

    pub fn with_energy(mut self, e0: f64, e: Profile) -> Self {
        self.left.e = Some(e0);
        self.e = Some(e);
        self
    }

    pub fn is_energy_mode(&self) -> bool {
        self.e.is_some()
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.x_max > self.r) {
            return Err(SdwError::EmptyWindow { r: self.r, x_max: self.x_max });
        }
        self.left.validate()?;
        if !(self.left.rho > 0.0) {
            return Err(SdwError::NonPositiveDensity { x: self.r, rho: self.left.rho });
        }
        if self.e.is_some() != self.left.e.is_some() {
            return Err(SdwError::InvalidState(
                "internal energy must be given on both sides of R or on neither".into(),
            ));
        }
        self.rho.validate()?;
        self.u.validate()?;
        if let Some(e) = &self.e {
            e.validate()?;
        }
        let n = 1000;
        for k in 0..=n {
            let x = self.r + (self.x_max - self.r) * k as f64 / n as f64;
            let rho = self.rho.value(x);
            if !(rho > 0.0) {
                return Err(SdwError::NonPositiveDensity { x, rho });
            }
        }
        Ok(())
    }

    /// Declared extremum points of u strictly inside (R, x_max).
    pub fn extrema(&self) -> Vec<f64> {
        self.u.extrema(self.r, self.x_max)
    }

    pub fn state_at(&self, x: f64) -> FluidState {
        if x <= self.r {
            return self.left;
        }
        let x = x.min(self.x_max);
        FluidState {
            rho: self.rho.value(x),
            u: self.u.value(x),
            e: self.e.as_ref().map(|p| p.value(x)),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PartitionMode {
    General,
    DecreasingOnly,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Partition {
    pub points: Vec<f64>,
    pub epsilon: f64,
    pub c: f64,
    pub mode: PartitionMode,
}

impl Partition {
    /// Lower spacing bound, the cube root of epsilon.
    pub fn spacing_lo(&self) -> f64 {
        self.epsilon.cbrt()
    }

    /// Upper spacing bound C * cbrt(epsilon), written mu in the refinement sweep.
    pub fn mu(&self) -> f64 {
        self.c * self.epsilon.cbrt()
    }

    pub fn cells(&self) -> usize {
        self.points.len() - 1
    }

    pub fn check_bounds(&self) -> Result<()> {
        let lo = self.spacing_lo();
        let hi = self.mu();
        let slack = 1e-12 * hi;
        for w in self.points.windows(2) {
            let gap = w[1] - w[0];
            if gap < lo - slack || gap > hi + slack {
                return Err(SdwError::SpacingBounds { gap, at: w[0], lo, hi });
            }
        }
        Ok(())
    }
}

pub fn build_partition(data: &InitialData, epsilon: f64, c: f64) -> Result<Partition> {
    build_partition_with_mode(data, epsilon, c, PartitionMode::General)
}

/// Equidistant cube-root partition of [R, x_max], segmented at the extrema of u.
pub fn build_partition_with_mode(
    data: &InitialData,
    epsilon: f64,
    c: f64,
    mode: PartitionMode,
) -> Result<Partition> {
    if !(epsilon > 0.0) {
        return Err(SdwError::NonPositiveEpsilon(epsilon));
    }
    if !(data.x_max > data.r) {
        return Err(SdwError::EmptyWindow { r: data.r, x_max: data.x_max });
    }
    if !(c >= 1.0) {
        return Err(SdwError::BadSpacingConstant(c));
    }
    let step = epsilon.cbrt();
    let length = data.x_max - data.r;
    if step > length * (1.0 + 1e-12) {
        return Err(SdwError::EpsilonTooLarge { spacing: step, length });
    }
    let mut anchors = vec![data.r];
    anchors.extend(data.extrema());
    anchors.push(data.x_max);
    let mut points = vec![data.r];
    for w in anchors.windows(2) {
        let seg = w[1] - w[0];
        let n = ((seg / step) * (1.0 + 1e-12)).floor() as usize;
        if n == 0 {
            return Err(SdwError::SpacingBounds { gap: seg, at: w[0], lo: step, hi: c * step });
        }
        for k in 1..n {
            points.push(w[0] + seg * k as f64 / n as f64);
        }
        points.push(w[1]);
    }
    let p = Partition { points, epsilon, c, mode };
    p.check_bounds()?;
    Ok(p)
}

#[derive(Debug, Clone, PartialEq)]
pub struct SampledStates {
    /// states[0] is the left state; states[i + 1] lives on (Y_i, Y_{i+1}].
    pub states: Vec<FluidState>,
}

pub fn sample_states(data: &InitialData, p: &Partition) -> Result<SampledStates> {
    let mut states = Vec::with_capacity(p.points.len());
    states.push(data.left);
    for &y in &p.points[1..] {
        let s = data.state_at(y);
        if !(s.rho > 0.0) {
            return Err(SdwError::NonPositiveDensity { x: y, rho: s.rho });
        }
        states.push(s);
    }
    Ok(SampledStates { states })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit(u: Profile) -> InitialData {
        InitialData::new(FluidState::new(1.0, 2.0), 0.0, Profile::Constant(1.0), u, 1.0)
    }

    #[test]
    fn cube_root_spacing() {
        let d = unit(Profile::Linear { a: 1.0, b: -1.0 });
        let p = build_partition(&d, 1e-3, 2.0).unwrap();
        assert_eq!(p.points.len(), 11);
        for (k, y) in p.points.iter().enumerate() {
            assert!((y - 0.1 * k as f64).abs() < 1e-12);
        }
    }

    #[test]
    fn extremum_becomes_partition_point() {
        let hat = Profile::AffineByParts { knots: vec![(0.0, 0.0), (0.25, 1.0), (1.0, 0.0)] };
        let d = unit(hat);
        assert_eq!(d.extrema(), vec![0.25]);
        let p = build_partition(&d, 1e-3, 1.5).unwrap();
        assert!(p.points.contains(&0.25));
        p.check_bounds().unwrap();
    }

    #[test]
    fn oversized_epsilon_is_rejected() {
        let d = unit(Profile::Constant(0.0));
        assert!(matches!(build_partition(&d, 8.0, 1.0), Err(SdwError::EpsilonTooLarge { .. })));
        assert!(matches!(build_partition(&d, 0.0, 1.0), Err(SdwError::NonPositiveEpsilon(_))));
        let mut bad = d.clone();
        bad.x_max = -1.0;
        assert!(matches!(build_partition(&bad, 1e-3, 1.0), Err(SdwError::EmptyWindow { .. })));
    }

    #[test]
    fn samples_take_right_endpoint_values() {
        let d = InitialData::new(
            FluidState::new(3.0, 7.0),
            0.0,
            Profile::Linear { a: 1.0, b: 1.0 },
            Profile::Linear { a: 0.0, b: -1.0 },
            1.0,
        );
        let p = Partition {
            points: vec![0.0, 0.5, 1.0],
            epsilon: 0.125,
            c: 2.0,
            mode: PartitionMode::General,
        };
        let s = sample_states(&d, &p).unwrap();
        assert_eq!(s.states[0], FluidState::new(3.0, 7.0));
        assert_eq!(s.states[1], FluidState::new(1.5, -0.5));
        assert_eq!(s.states[2], FluidState::new(2.0, -1.0));
    }

    #[test]
    fn nonpositive_density_is_rejected() {
        let d = InitialData::new(
            FluidState::new(1.0, 0.0),
            0.0,
            Profile::Linear { a: 0.5, b: -1.0 },
            Profile::Constant(0.0),
            1.0,
        );
        let p = build_partition(&d, 1e-3, 2.0).unwrap();
        assert!(matches!(sample_states(&d, &p), Err(SdwError::NonPositiveDensity { .. })));
    }

    #[test]
    fn monotone_cubic_preserves_monotone_data() {
        let xs: Vec<f64> = (0..11).map(|i| i as f64 / 10.0).collect();
        let ys: Vec<f64> = xs.iter().map(|x| if *x < 0.5 { 0.0 } else { 1.0 }).collect();
        let m = MonotoneCubic::new(xs, ys).unwrap();
        let mut prev = m.value(0.0);
        for k in 1..=1000 {
            let v = m.value(k as f64 / 1000.0);
            assert!(v >= prev - 1e-15);
            prev = v;
        }
        assert!(Profile::Table(m).extrema(0.0, 1.0).is_empty());
    }

    #[test]
    fn table_derivative_matches_difference_quotient() {
        let xs: Vec<f64> = (0..21).map(|i| i as f64 / 20.0).collect();
        let ys: Vec<f64> = xs.iter().map(|x| (3.0 * x).sin()).collect();
        let m = MonotoneCubic::new(xs, ys).unwrap();
        for &x in &[0.13, 0.41, 0.77] {
            let h = 1e-6;
            let fd = (m.value(x + h) - m.value(x - h)) / (2.0 * h);
            assert!((fd - m.derivative(x)).abs() < 1e-6);
        }
    }
}
