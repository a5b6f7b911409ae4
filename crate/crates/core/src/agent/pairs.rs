/// Outcome class of a pair `(j, l)` after measuring qudits `j` and `l`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PairCase {
    /// Neither qudit landed on the other's label.
    DoubleReward,
    /// Exactly one qudit landed on the other's label.
    Mixed,
    /// Both qudits landed on each other's labels.
    DoublePunishment,
}

impl PairCase {
    pub fn classify(m_j: usize, m_l: usize, j: usize, l: usize) -> Self {
        match (m_j == l, m_l == j) {
            (false, false) => PairCase::DoubleReward,
            (true, true) => PairCase::DoublePunishment,
            _ => PairCase::Mixed,
        }
    }
}

/// Strictly upper-triangular table of per-pair values, packed in lexicographic
/// pair order `(0,1), (0,2), …, (0,d-1), (1,2), …`.
#[derive(Debug, Clone, PartialEq)]
pub struct PairTable {
    dim: usize,
    values: Vec<f64>,
}

impl PairTable {
    pub fn filled(dim: usize, value: f64) -> Self {
        Self { dim, values: vec![value; dim * dim.saturating_sub(1) / 2] }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    fn offset(&self, j: usize, l: usize) -> usize {
        debug_assert!(j < l && l < self.dim);
        j * (2 * self.dim - j - 1) / 2 + (l - j - 1)
    }

    pub fn get(&self, j: usize, l: usize) -> f64 {
        self.values[self.offset(j, l)]
    }

    pub fn set(&mut self, j: usize, l: usize, v: f64) {
        let o = self.offset(j, l);
        self.values[o] = v;
    }

    pub fn fill(&mut self, v: f64) {
        self.values.fill(v);
    }

    pub fn max(&self) -> f64 {
        self.values.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    /// Values in lexicographic pair order.
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// `(j, l)` in lexicographic order.
    pub fn pairs(dim: usize) -> impl Iterator<Item = (usize, usize)> {
        (0..dim).flat_map(move |j| ((j + 1)..dim).map(move |l| (j, l)))
    }
}
