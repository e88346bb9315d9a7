//! Dense record of the accepted trajectory for delayed evaluation.

/// Accepted points `(t, δ, δ̇, δ̈)`; between two points `δ` is the cubic
/// Hermite interpolant with slopes `δ̇` and `δ̇` the one with slopes `δ̈`.
/// Before the first point the solid is at rest at `δ₀`.
#[derive(Debug, Clone, Default)]
pub struct HistoryBuffer {
    t: Vec<f64>,
    delta: Vec<f64>,
    delta_dot: Vec<f64>,
    delta_ddot: Vec<f64>,
}

fn hermite(t0: f64, t1: f64, y0: f64, y1: f64, d0: f64, d1: f64, t: f64) -> f64 {
    let h = t1 - t0;
    let s = (t - t0) / h;
    let s2 = s * s;
    let s3 = s2 * s;
    let h00 = 2.0 * s3 - 3.0 * s2 + 1.0;
    let h10 = s3 - 2.0 * s2 + s;
    let h01 = -2.0 * s3 + 3.0 * s2;
    let h11 = s3 - s2;
    h00 * y0 + h10 * h * d0 + h01 * y1 + h11 * h * d1
}

impl HistoryBuffer {
    pub fn new(t0: f64, delta: f64, delta_dot: f64, delta_ddot: f64) -> Self {
        HistoryBuffer {
            t: vec![t0],
            delta: vec![delta],
            delta_dot: vec![delta_dot],
            delta_ddot: vec![delta_ddot],
        }
    }

    /// Appends an accepted point. Times must increase strictly.
    pub fn push(&mut self, t: f64, delta: f64, delta_dot: f64, delta_ddot: f64) {
        assert!(t > self.t_end(), "history times must increase");
        self.t.push(t);
        self.delta.push(delta);
        self.delta_dot.push(delta_dot);
        self.delta_ddot.push(delta_ddot);
    }

    pub fn t_start(&self) -> f64 {
        self.t[0]
    }

    pub fn t_end(&self) -> f64 {
        *self.t.last().expect("history is never empty")
    }

    pub fn len(&self) -> usize {
        self.t.len()
    }

    pub fn is_empty(&self) -> bool {
        self.t.is_empty()
    }

    /// Segment index whose interval contains `t`; the last one past the end.
    fn segment(&self, t: f64) -> usize {
        let n = self.t.len();
        match self.t.binary_search_by(|probe| probe.total_cmp(&t)) {
            Ok(k) => k.min(n - 2),
            Err(k) => k.clamp(1, n - 1) - 1,
        }
    }

    pub fn delta(&self, t: f64) -> f64 {
        if t <= self.t_start() || self.t.len() == 1 {
            return self.delta[0];
        }
        let k = self.segment(t);
        hermite(
            self.t[k],
            self.t[k + 1],
            self.delta[k],
            self.delta[k + 1],
            self.delta_dot[k],
            self.delta_dot[k + 1],
            t,
        )
    }

    pub fn delta_dot(&self, t: f64) -> f64 {
        if t < self.t_start() {
            return 0.0;
        }
        if self.t.len() == 1 || t == self.t_start() {
            return self.delta_dot[0];
        }
        let k = self.segment(t);
        hermite(
            self.t[k],
            self.t[k + 1],
            self.delta_dot[k],
            self.delta_dot[k + 1],
            self.delta_ddot[k],
            self.delta_ddot[k + 1],
            t,
        )
    }
}
