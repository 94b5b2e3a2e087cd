use super::pauli::{Parity, PauliString};
use super::SurgeryError;

/// Initial state of an ancilla patch.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Basis {
    /// `|0>`, stabilized by Z.
    Zero,
    /// `|+>`, stabilized by X.
    Plus,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Clifford {
    H(usize),
    S(usize),
    Cnot(usize, usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MeasurementOutcome {
    /// Index of the measurement in the tableau's history.
    pub index: usize,
    /// True when the operator (up to sign) was already in the stabilizer group.
    pub deterministic: bool,
    /// Outcome as a parity of earlier random outcomes; a random outcome is its own bit.
    pub value: Parity,
}

/// Stabilizer group plus tracked logical `(X, Z)` pairs over a fixed patch set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StabilizerTableau {
    n: usize,
    pub stabilizers: Vec<PauliString>,
    pub logicals: Vec<(PauliString, PauliString)>,
    pub outcomes: Vec<MeasurementOutcome>,
    /// Values pinned by forced measurements.
    forced: u64,
    pinned: u64,
}

fn pack(p: &PauliString) -> u128 {
    p.x as u128 | (p.z as u128) << 64
}

/// Subset (bitmask over `vectors`) whose XOR equals `target`, if any.
pub(crate) fn solve_span(vectors: &[u128], target: u128) -> Option<u64> {
    let mut rows: Vec<(u128, u64)> = Vec::new();
    for (i, &v) in vectors.iter().enumerate() {
        let mut v = (v, 1u64 << i);
        for r in &rows {
            let pivot = 127 - r.0.leading_zeros();
            if v.0 >> pivot & 1 == 1 {
                v = (v.0 ^ r.0, v.1 ^ r.1);
            }
        }
        if v.0 != 0 {
            rows.push(v);
            rows.sort_by_key(|r| r.0.leading_zeros());
        }
    }
    let mut t = (target, 0u64);
    for r in &rows {
        let pivot = 127 - r.0.leading_zeros();
        if t.0 >> pivot & 1 == 1 {
            t = (t.0 ^ r.0, t.1 ^ r.1);
        }
    }
    (t.0 == 0).then_some(t.1)
}

impl StabilizerTableau {
    /// `n` patches: `inputs` carry arbitrary logical states, every other patch
    /// is prepared in the basis given by `init`.
    pub fn new(n: usize, inputs: &[usize], init: &[(usize, Basis)]) -> Result<Self, SurgeryError> {
        if n > 64 {
            return Err(SurgeryError::TooManyPatches(n));
        }
        let mut covered = 0u64;
        let mut claim = |p: usize| -> Result<(), SurgeryError> {
            if p >= n || covered >> p & 1 == 1 {
                return Err(SurgeryError::BadPatch(p));
            }
            covered |= 1 << p;
            Ok(())
        };
        for &p in inputs {
            claim(p)?;
        }
        for &(p, _) in init {
            claim(p)?;
        }
        if covered.count_ones() as usize != n {
            return Err(SurgeryError::Uncovered);
        }
        Ok(StabilizerTableau {
            n,
            stabilizers: init
                .iter()
                .map(|&(p, b)| PauliString::single(p, if b == Basis::Zero { 'Z' } else { 'X' }))
                .collect(),
            logicals: inputs
                .iter()
                .map(|&p| (PauliString::single(p, 'X'), PauliString::single(p, 'Z')))
                .collect(),
            outcomes: Vec::new(),
            forced: 0,
            pinned: 0,
        })
    }

    pub fn n_patches(&self) -> usize {
        self.n
    }

    fn tracked_mut(&mut self) -> impl Iterator<Item = &mut PauliString> {
        self.stabilizers
            .iter_mut()
            .chain(self.logicals.iter_mut().flat_map(|(x, z)| [x, z]))
    }

    /// Product of stabilizers equal to `op` up to sign, if `op` is in the group.
    pub fn group_element(&self, op: &PauliString) -> Option<PauliString> {
        let vecs: Vec<u128> = self.stabilizers.iter().map(pack).collect();
        let subset = solve_span(&vecs, pack(op))?;
        Some(
            self.stabilizers
                .iter()
                .enumerate()
                .filter(|(i, _)| subset >> i & 1 == 1)
                .fold(PauliString::identity(), |acc, (_, s)| acc.mul(s)),
        )
    }

    /// Measures the Hermitian operator `op`. Random outcomes become a fresh
    /// symbolic bit, optionally pinned to `forced`.
    pub fn measure(&mut self, op: &PauliString, forced: Option<bool>) -> Result<MeasurementOutcome, SurgeryError> {
        if !op.is_hermitian() || op.signs != 0 || op.support() >> self.n != 0 {
            return Err(SurgeryError::NotHermitian);
        }
        let index = self.outcomes.len();
        if index >= 64 {
            return Err(SurgeryError::TooManyMeasurements);
        }
        let anti: Vec<usize> = (0..self.stabilizers.len())
            .filter(|&i| !self.stabilizers[i].commutes(op))
            .collect();
        let outcome = if let Some(&a) = anti.first() {
            let pivot = self.stabilizers[a];
            for &i in &anti[1..] {
                self.stabilizers[i] = self.stabilizers[i].mul(&pivot);
            }
            for (x, z) in &mut self.logicals {
                for l in [x, z] {
                    if !l.commutes(op) {
                        *l = l.mul(&pivot);
                    }
                }
            }
            let mut new = *op;
            new.signs = 1 << index;
            self.stabilizers[a] = new;
            if let Some(b) = forced {
                self.pinned |= 1 << index;
                self.forced |= (b as u64) << index;
            }
            MeasurementOutcome {
                index,
                deterministic: false,
                value: Parity::bit(index),
            }
        } else {
            if self.logicals.iter().any(|(x, z)| !x.commutes(op) || !z.commutes(op)) {
                return Err(SurgeryError::LogicalCollapse(index));
            }
            let q = self.group_element(op).ok_or(SurgeryError::NotInGroup)?;
            // q = (-1)^v op on the code space, so the outcome bit is v.
            let value = q.sign().xor(op.sign());
            if let Some(b) = forced {
                if value.mask & !self.pinned == 0 && value.eval(self.forced) != b {
                    return Err(SurgeryError::InconsistentOutcome(index));
                }
            }
            MeasurementOutcome {
                index,
                deterministic: true,
                value,
            }
        };
        self.outcomes.push(outcome);
        Ok(outcome)
    }

    pub fn apply(&mut self, g: Clifford) {
        for p in self.tracked_mut() {
            match g {
                Clifford::H(q) => {
                    let bit = 1u64 << q;
                    if p.x & p.z & bit != 0 {
                        p.negate();
                    }
                    let (x, z) = (p.x & bit, p.z & bit);
                    p.x = p.x & !bit | z;
                    p.z = p.z & !bit | x;
                }
                Clifford::S(q) => {
                    let bit = 1u64 << q;
                    if p.x & bit != 0 {
                        p.ipow = (p.ipow + 1) % 4;
                        p.z ^= bit;
                    }
                }
                Clifford::Cnot(c, t) => {
                    if p.x >> c & 1 == 1 {
                        p.x ^= 1 << t;
                    }
                    if p.z >> t & 1 == 1 {
                        p.z ^= 1 << c;
                    }
                }
            }
        }
    }

    /// Stabilizers commute pairwise, are independent, and every logical
    /// commutes with them and anticommutes only with its partner.
    pub fn check_invariants(&self) -> bool {
        let s = &self.stabilizers;
        let pairwise = s.iter().enumerate().all(|(i, a)| s[i + 1..].iter().all(|b| a.commutes(b)));
        let vecs: Vec<u128> = s.iter().map(pack).collect();
        let independent = (0..vecs.len()).all(|i| {
            let rest: Vec<u128> = vecs.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, v)| *v).collect();
            solve_span(&rest, vecs[i]).is_none()
        });
        let l = &self.logicals;
        let logical_ok = l.iter().enumerate().all(|(i, (xi, zi))| {
            s.iter().all(|st| xi.commutes(st) && zi.commutes(st))
                && !xi.commutes(zi)
                && l.iter().enumerate().all(|(j, (xj, zj))| {
                    i == j || (xi.commutes(xj) && xi.commutes(zj) && zi.commutes(xj) && zi.commutes(zj))
                })
        });
        let full = s.len() + l.len() == self.n;
        pairwise && independent && logical_ok && full
    }

    /// Rewrites `op` times stabilizers so that it has no support outside
    /// `keep` (a patch bitmask).
    pub fn reduce_onto(&self, op: &PauliString, keep: u64) -> Option<PauliString> {
        let outside = |p: &PauliString| {
            let m = !keep;
            (p.x & m) as u128 | ((p.z & m) as u128) << 64
        };
        let vecs: Vec<u128> = self.stabilizers.iter().map(outside).collect();
        let subset = solve_span(&vecs, outside(op))?;
        Some(
            self.stabilizers
                .iter()
                .enumerate()
                .filter(|(i, _)| subset >> i & 1 == 1)
                .fold(*op, |acc, (_, s)| acc.mul(s)),
        )
    }
}
