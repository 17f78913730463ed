use std::fmt;
use std::io::{self, Write};

/// Joint (layer A, layer B) state of one individual.
///
/// The first letter is the awareness state on the virtual layer A
/// (S unaware, I aware and spreading, R aware but silent), the second the
/// disease state on the physical layer B (S, I, R). The last three variants
/// carry an immunized B component and only exist in [`Mode::Immunized`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum JointState {
    SS,
    SI,
    SR,
    IS,
    II,
    IR,
    RS,
    RI,
    RR,
    /// Unaware, immunized.
    SV,
    /// Aware, immunized.
    IV,
    /// Silent-aware, immunized.
    RV,
}

pub const BASE_STATES: [JointState; 9] = [
    JointState::SS,
    JointState::SI,
    JointState::SR,
    JointState::IS,
    JointState::II,
    JointState::IR,
    JointState::RS,
    JointState::RI,
    JointState::RR,
];

pub const ALL_STATES: [JointState; 12] = [
    JointState::SS,
    JointState::SI,
    JointState::SR,
    JointState::IS,
    JointState::II,
    JointState::IR,
    JointState::RS,
    JointState::RI,
    JointState::RR,
    JointState::SV,
    JointState::IV,
    JointState::RV,
];

impl JointState {
    #[inline]
    pub const fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(i: usize) -> Option<Self> {
        ALL_STATES.get(i).copied()
    }

    pub const fn label(self) -> &'static str {
        match self {
            JointState::SS => "SS",
            JointState::SI => "SI",
            JointState::SR => "SR",
            JointState::IS => "IS",
            JointState::II => "II",
            JointState::IR => "IR",
            JointState::RS => "RS",
            JointState::RI => "RI",
            JointState::RR => "RR",
            JointState::SV => "SI'",
            JointState::IV => "II'",
            JointState::RV => "RI'",
        }
    }

    /// S component on layer A.
    #[inline]
    pub const fn is_unaware(self) -> bool {
        matches!(
            self,
            JointState::SS | JointState::SI | JointState::SR | JointState::SV
        )
    }

    /// I component on layer A, i.e. actively spreading awareness.
    #[inline]
    pub const fn is_spreading_awareness(self) -> bool {
        matches!(
            self,
            JointState::IS | JointState::II | JointState::IR | JointState::IV
        )
    }

    /// I component on layer B.
    #[inline]
    pub const fn is_infected(self) -> bool {
        matches!(self, JointState::SI | JointState::II | JointState::RI)
    }

    /// R component on layer B.
    #[inline]
    pub const fn is_recovered(self) -> bool {
        matches!(self, JointState::SR | JointState::IR | JointState::RR)
    }

    #[inline]
    pub const fn is_immunized(self) -> bool {
        matches!(self, JointState::SV | JointState::IV | JointState::RV)
    }
}

impl fmt::Display for JointState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// Nine-state dynamics, or the twelve-state extension with immunized nodes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Base,
    Immunized,
}

impl Mode {
    pub const fn state_count(self) -> usize {
        match self {
            Mode::Base => 9,
            Mode::Immunized => 12,
        }
    }

    pub fn states(self) -> &'static [JointState] {
        &ALL_STATES[..self.state_count()]
    }
}

/// Per-node probabilities over the joint states, stored row-major with one
/// row of `mode.state_count()` entries per node.
#[derive(Clone, Debug, PartialEq)]
pub struct JointStateDistribution {
    mode: Mode,
    n: usize,
    p: Vec<f64>,
}

impl JointStateDistribution {
    /// Every node fully in `state`.
    pub fn uniform_state(n: usize, mode: Mode, state: JointState) -> Self {
        assert!(state.index() < mode.state_count(), "{state} not in {mode:?}");
        let k = mode.state_count();
        let mut p = vec![0.0; n * k];
        for row in p.chunks_exact_mut(k) {
            row[state.index()] = 1.0;
        }
        Self { mode, n, p }
    }

    /// Build from explicit rows; each row must have `mode.state_count()`
    /// entries.
    pub fn from_rows(mode: Mode, rows: &[Vec<f64>]) -> Self {
        let k = mode.state_count();
        let mut p = Vec::with_capacity(rows.len() * k);
        for row in rows {
            assert_eq!(row.len(), k, "row width must match mode");
            p.extend_from_slice(row);
        }
        Self {
            mode,
            n: rows.len(),
            p,
        }
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn node_count(&self) -> usize {
        self.n
    }

    pub fn stride(&self) -> usize {
        self.mode.state_count()
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[f64] {
        let k = self.stride();
        &self.p[i * k..(i + 1) * k]
    }

    pub fn set_point_mass(&mut self, i: usize, state: JointState) {
        let k = self.stride();
        assert!(state.index() < k, "{state} not in {:?}", self.mode);
        let row = &mut self.p[i * k..(i + 1) * k];
        row.fill(0.0);
        row[state.index()] = 1.0;
    }

    #[inline]
    pub fn get(&self, i: usize, state: JointState) -> f64 {
        self.row(i).get(state.index()).copied().unwrap_or(0.0)
    }

    pub(crate) fn raw(&self) -> &[f64] {
        &self.p
    }

    pub(crate) fn raw_mut(&mut self) -> &mut Vec<f64> {
        &mut self.p
    }

    /// Sum of the probabilities of the states of node `i` selected by `pred`.
    pub fn mass(&self, i: usize, pred: impl Fn(JointState) -> bool) -> f64 {
        self.row(i)
            .iter()
            .zip(self.mode.states())
            .filter(|(_, s)| pred(**s))
            .map(|(p, _)| *p)
            .sum()
    }

    /// p_i^{I_A}: probability of actively spreading awareness.
    pub fn aware_spreading(&self, i: usize) -> f64 {
        aware_spreading_mass(self.row(i))
    }

    /// p_i^{I_B}: probability of being infected.
    pub fn infected(&self, i: usize) -> f64 {
        infected_mass(self.row(i))
    }

    pub fn recovered(&self, i: usize) -> f64 {
        let r = self.row(i);
        r[JointState::SR.index()] + r[JointState::IR.index()] + r[JointState::RR.index()]
    }

    /// Largest deviation of any row sum from one.
    pub fn max_normalization_error(&self) -> f64 {
        self.p
            .chunks_exact(self.stride())
            .map(|r| (r.iter().sum::<f64>() - 1.0).abs())
            .fold(0.0, f64::max)
    }

    /// Snapshot as CSV with header `node,state,probability`.
    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "node,state,probability")?;
        for i in 0..self.n {
            for (s, p) in self.mode.states().iter().zip(self.row(i)) {
                writeln!(out, "{i},{s},{p}")?;
            }
        }
        Ok(())
    }
}

#[inline]
pub(crate) fn aware_spreading_mass(row: &[f64]) -> f64 {
    let base = row[JointState::IS.index()] + row[JointState::II.index()] + row[JointState::IR.index()];
    match row.get(JointState::IV.index()) {
        Some(v) => base + v,
        None => base,
    }
}

#[inline]
pub(crate) fn infected_mass(row: &[f64]) -> f64 {
    row[JointState::SI.index()] + row[JointState::II.index()] + row[JointState::RI.index()]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn state_counts() {
        assert_eq!(Mode::Base.states().len(), 9);
        assert_eq!(Mode::Immunized.states().len(), 12);
        for (i, s) in ALL_STATES.iter().enumerate() {
            assert_eq!(s.index(), i);
            assert_eq!(JointState::from_index(i), Some(*s));
        }
    }

    #[test]
    fn component_predicates_partition() {
        for s in BASE_STATES {
            let a = [s.is_unaware(), s.is_spreading_awareness()]
                .iter()
                .filter(|b| **b)
                .count();
            assert!(a <= 1);
            assert!(!(s.is_infected() && s.is_recovered()));
            assert!(!s.is_immunized());
        }
        assert!(JointState::IV.is_spreading_awareness());
        assert!(!JointState::IV.is_infected());
    }

    #[test]
    fn marginals_include_immunized_aware() {
        let mut rows = vec![vec![0.0; 12]];
        rows[0][JointState::IV.index()] = 0.5;
        rows[0][JointState::IS.index()] = 0.25;
        rows[0][JointState::RI.index()] = 0.25;
        let d = JointStateDistribution::from_rows(Mode::Immunized, &rows);
        assert_eq!(d.aware_spreading(0), 0.75);
        assert_eq!(d.infected(0), 0.25);
    }

    #[test]
    fn csv_snapshot() {
        let d = JointStateDistribution::uniform_state(1, Mode::Base, JointState::SS);
        let mut buf = Vec::new();
        d.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("node,state,probability"));
        assert_eq!(lines.next(), Some("0,SS,1"));
        assert_eq!(text.lines().count(), 10);
    }
}
