//! Bounded closed time scales.
//!
//! A [`TimeScale`] is a finite union of disjoint closed intervals, where a
//! degenerate interval `[a, a]` is an isolated point. Dense intervals are
//! sampled at `dense_step` when a numerical walk over the scale is needed,
//! but the jump operators and the exponential treat them exactly.

use std::cmp::Ordering;

use crate::error::{Error, Result};

/// A closed interval `[start, end]`; `start == end` is an isolated point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Segment {
    pub start: f64,
    pub end: f64,
}

impl Segment {
    pub fn is_point(&self) -> bool {
        self.start == self.end
    }

    pub fn length(&self) -> f64 {
        self.end - self.start
    }
}

/// One sample of a numerical walk over a time scale.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridPoint {
    pub t: f64,
    /// Graininess `sigma(t) - t`; zero at right-dense points and at the maximum.
    pub mu: f64,
    pub is_dense: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TimeScale {
    segments: Vec<Segment>,
    dense_step: f64,
}

impl TimeScale {
    /// The grid `{t0, t0 + h, ..., t0 + n_steps h}` as isolated points.
    pub fn uniform(t0: f64, h: f64, n_steps: usize) -> Result<Self> {
        if !(h > 0.0) || !h.is_finite() {
            return Err(Error::InvalidArgument(format!("grid step must be positive, got {h}")));
        }
        if n_steps == 0 {
            return Err(Error::InvalidArgument("grid needs at least one step".into()));
        }
        if !t0.is_finite() {
            return Err(Error::InvalidArgument(format!("grid origin must be finite, got {t0}")));
        }
        let segments: Vec<Segment> = (0..=n_steps)
            .map(|i| {
                let t = t0 + i as f64 * h;
                Segment { start: t, end: t }
            })
            .collect();
        if segments.windows(2).any(|w| !(w[0].end < w[1].start)) || !segments.last().unwrap().end.is_finite() {
            return Err(Error::InvalidArgument("grid points are not strictly increasing in floating point".into()));
        }
        Ok(TimeScale { segments, dense_step: h })
    }

    /// Builds a scale from arbitrary closed intervals. Intervals are sorted and
    /// touching intervals merged; overlapping ones are rejected.
    pub fn union(segments: &[(f64, f64)], dense_step: f64) -> Result<Self> {
        if segments.is_empty() {
            return Err(Error::InvalidArgument("time scale needs at least one segment".into()));
        }
        if !(dense_step > 0.0) || !dense_step.is_finite() {
            return Err(Error::InvalidArgument(format!("dense_step must be positive, got {dense_step}")));
        }
        let mut segs = Vec::with_capacity(segments.len());
        for &(a, b) in segments {
            if !a.is_finite() || !b.is_finite() {
                return Err(Error::InvalidArgument(format!("segment [{a}, {b}] is not finite")));
            }
            if a > b {
                return Err(Error::InvalidArgument(format!("segment [{a}, {b}] has start > end")));
            }
            segs.push(Segment { start: a, end: b });
        }
        segs.sort_by(|x, y| x.start.partial_cmp(&y.start).unwrap_or(Ordering::Equal));

        let mut merged: Vec<Segment> = Vec::with_capacity(segs.len());
        for s in segs {
            match merged.last_mut() {
                Some(last) if s.start < last.end => {
                    return Err(Error::InvalidArgument(format!(
                        "segments [{}, {}] and [{}, {}] overlap",
                        last.start, last.end, s.start, s.end
                    )));
                }
                Some(last) if s.start == last.end => last.end = last.end.max(s.end),
                _ => merged.push(s),
            }
        }
        Ok(TimeScale { segments: merged, dense_step })
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    pub fn dense_step(&self) -> f64 {
        self.dense_step
    }

    pub fn min(&self) -> f64 {
        self.segments[0].start
    }

    pub fn max(&self) -> f64 {
        self.segments[self.segments.len() - 1].end
    }

    pub fn contains(&self, t: f64) -> bool {
        self.locate(t).is_some()
    }

    /// Index of the segment holding `t`.
    fn locate(&self, t: f64) -> Option<usize> {
        if !t.is_finite() {
            return None;
        }
        // first segment whose end >= t
        let k = self.segments.partition_point(|s| s.end < t);
        match self.segments.get(k) {
            Some(s) if s.start <= t => Some(k),
            _ => None,
        }
    }

    fn locate_or_err(&self, t: f64) -> Result<usize> {
        self.locate(t).ok_or_else(|| Error::Domain(format!("t = {t} is not a point of the time scale")))
    }

    /// Gap following segment `k`, or `None` for the last one.
    fn gap_after(&self, k: usize) -> Option<f64> {
        self.segments.get(k + 1).map(|n| n.start - self.segments[k].end)
    }

    /// Forward jump operator. At the maximum it returns `t` itself.
    pub fn sigma(&self, t: f64) -> Result<f64> {
        let k = self.locate_or_err(t)?;
        let seg = self.segments[k];
        if t < seg.end {
            return Ok(t);
        }
        Ok(self.segments.get(k + 1).map_or(t, |n| n.start))
    }

    /// Backward jump operator. At the minimum it returns `t` itself.
    pub fn rho(&self, t: f64) -> Result<f64> {
        let k = self.locate_or_err(t)?;
        let seg = self.segments[k];
        if t > seg.start || k == 0 {
            return Ok(t);
        }
        Ok(self.segments[k - 1].end)
    }

    pub fn graininess(&self, t: f64) -> Result<f64> {
        Ok(self.sigma(t)? - t)
    }

    /// Supremum of the graininess over every point but the maximum.
    pub fn mu_sup(&self) -> f64 {
        (0..self.segments.len()).filter_map(|k| self.gap_after(k)).fold(0.0, f64::max)
    }

    /// Right-scattered points together with their graininess.
    pub fn scattered_points(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        (0..self.segments.len()).filter_map(move |k| self.gap_after(k).map(|g| (self.segments[k].end, g)))
    }

    /// Deterministic sampling of the scale. Isolated points are emitted as-is;
    /// a non-degenerate `[a, b]` yields `a, a + step, ...` strictly below `b`,
    /// then `b` itself.
    pub fn points(&self) -> Vec<GridPoint> {
        let mut out = Vec::new();
        let step = self.dense_step;
        for (k, seg) in self.segments.iter().enumerate() {
            if !seg.is_point() {
                let mut i = 0usize;
                loop {
                    let t = seg.start + i as f64 * step;
                    // drop samples that would sit on top of the segment end
                    if t >= seg.end - 1e-9 * step {
                        break;
                    }
                    out.push(GridPoint { t, mu: 0.0, is_dense: true });
                    i += 1;
                }
            }
            out.push(GridPoint { t: seg.end, mu: self.gap_after(k).unwrap_or(0.0), is_dense: false });
        }
        out
    }

    /// Time-scale exponential `e_p(t, t0)` for a constant `p` and `t0 <= t`:
    /// the product of `1 + mu(s) p` over right-scattered `s` in `[t0, t)`
    /// times `exp(p * L)`, with `L` the dense length of `[t0, t]`.
    pub fn exp(&self, p: f64, t: f64, t0: f64) -> Result<f64> {
        let k0 = self.locate_or_err(t0)?;
        let k1 = self.locate_or_err(t)?;
        if t < t0 {
            return Err(Error::Domain(format!("backward exponential (t = {t} < t0 = {t0}) is not supported")));
        }
        if k0 == k1 {
            return Ok((p * (t - t0)).exp());
        }
        let mut product = 1.0;
        let mut dense = self.segments[k0].end - t0;
        for k in k0..k1 {
            let gap = self.gap_after(k).expect("k < k1 so a successor exists");
            let factor = 1.0 + gap * p;
            if factor == 0.0 {
                return Err(Error::Regressivity { t: self.segments[k].end, factor });
            }
            product *= factor;
            if k > k0 {
                dense += self.segments[k].length();
            }
        }
        dense += t - self.segments[k1].start;
        Ok(product * (p * dense).exp())
    }

    /// First grid point where `1 + mu p <= 0`, if any.
    fn first_nonpositive(&self, p: f64) -> Option<(f64, f64)> {
        self.scattered_points().map(|(t, mu)| (t, 1.0 + mu * p)).find(|&(_, f)| !(f > 0.0))
    }

    /// `true` iff `1 + mu(t) p > 0` on the whole scale.
    pub fn regressive_positive(&self, p: f64) -> bool {
        self.first_nonpositive(p).is_none()
    }
}

/// Envelope `(b/alpha) [1 + (alpha y0 / b - 1) e_{-alpha}(t, t0)]` bounding
/// solutions of `y^Delta >= (<=) b - alpha y^sigma`.
pub fn comparison_bound(b: f64, alpha: f64, y0: f64, ts: &TimeScale, t: f64, t0: f64) -> Result<f64> {
    if !(b > 0.0) || !b.is_finite() {
        return Err(Error::InvalidArgument(format!("b must be positive, got {b}")));
    }
    if !(alpha > 0.0) || !alpha.is_finite() {
        return Err(Error::InvalidArgument(format!("alpha must be positive, got {alpha}")));
    }
    if let Some((at, factor)) = ts.first_nonpositive(-alpha) {
        return Err(Error::Regressivity { t: at, factor });
    }
    let decay = ts.exp(-alpha, t, t0)?;
    Ok(b / alpha * (1.0 + (alpha * y0 / b - 1.0) * decay))
}
