//! Logical-level verification of lattice-surgery constructions.
//!
//! One tableau qubit stands for one code patch. A construction lists the
//! patches holding input states, the preparation of every other patch, and a
//! sequence of joint or single-patch measurements. The verifier tracks the
//! input logicals through the sequence with symbolic outcome bits, checks that
//! they land on the output patches as the ideal gate prescribes, derives the
//! outcome-conditioned Pauli frame from the recorded signs, and then checks
//! every outcome branch.

mod constructions;
mod pauli;
mod tableau;

pub use constructions::*;
pub use pauli::{Parity, PauliString};
pub use tableau::{Basis, Clifford, MeasurementOutcome, StabilizerTableau};

use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SurgeryError {
    #[error("at most 64 patches are supported, got {0}")]
    TooManyPatches(usize),
    #[error("at most 64 measurements are supported")]
    TooManyMeasurements,
    #[error("patch {0} is out of range or listed twice")]
    BadPatch(usize),
    #[error("some patch is neither an input nor prepared")]
    Uncovered,
    #[error("measured operator must be a Hermitian Pauli string on declared patches")]
    NotHermitian,
    #[error("measurement {0} reveals logical information")]
    LogicalCollapse(usize),
    #[error("forced outcome contradicts deterministic measurement {0}")]
    InconsistentOutcome(usize),
    #[error("operator commutes with everything but is not in the stabilizer group")]
    NotInGroup,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Step {
    Measure(PauliString),
    Gate(Clifford),
}

/// The gate a construction should implement from input to output patches.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Ideal {
    /// Input `j` ends on output `j` unchanged.
    Identity,
    /// Input 0 controls input 1.
    Cnot,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Construction {
    pub name: String,
    pub labels: Vec<String>,
    pub inputs: Vec<usize>,
    pub outputs: Vec<usize>,
    pub init: Vec<(usize, Basis)>,
    pub steps: Vec<Step>,
    pub ideal: Ideal,
    /// Patch pairs sharing a boundary; joint measurements must follow them.
    pub adjacent: Vec<(usize, usize)>,
}

impl Construction {
    pub fn n_patches(&self) -> usize {
        self.labels.len()
    }

    pub fn describe_step(&self, s: &Step) -> String {
        match s {
            Step::Measure(p) => {
                let (letters, names): (String, Vec<&str>) = (0..self.n_patches())
                    .filter(|&i| p.support() >> i & 1 == 1)
                    .map(|i| (p.letter(i), self.labels[i].as_str()))
                    .unzip();
                format!("M_{letters}({})", names.join(","))
            }
            Step::Gate(g) => format!("{g:?}"),
        }
    }

    /// Images of the input logicals under the ideal gate, in the order
    /// X0, Z0, X1, Z1, ...
    pub fn expected_images(&self) -> Vec<PauliString> {
        let o = &self.outputs;
        let one = |p: usize, l: char| PauliString::single(p, l);
        match self.ideal {
            Ideal::Identity => o.iter().flat_map(|&p| [one(p, 'X'), one(p, 'Z')]).collect(),
            Ideal::Cnot => {
                let (c, t) = (o[0], o[1]);
                vec![
                    one(c, 'X').mul(&one(t, 'X')),
                    one(c, 'Z'),
                    one(t, 'X'),
                    one(c, 'Z').mul(&one(t, 'Z')),
                ]
            }
        }
    }

    /// A joint measurement is legal when its patches form a path of
    /// boundary-sharing pairs.
    pub fn is_local(&self, p: &PauliString) -> bool {
        let support = p.support();
        if support.count_ones() <= 1 {
            return true;
        }
        let start = support.trailing_zeros() as usize;
        let mut reached = 1u64 << start;
        loop {
            let before = reached;
            for &(a, b) in &self.adjacent {
                let (ma, mb) = (1u64 << a, 1u64 << b);
                if support & ma != 0 && support & mb != 0 && (reached & ma != 0 || reached & mb != 0) {
                    reached |= ma | mb;
                }
            }
            if reached == before {
                return reached == support;
            }
        }
    }

    fn output_mask(&self) -> u64 {
        self.outputs.iter().fold(0, |m, &p| m | 1 << p)
    }
}

/// One outcome-conditioned correction: apply `letter` on `patch` when
/// `condition` evaluates to 1.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FrameTerm {
    pub patch: usize,
    pub letter: char,
    pub condition: Parity,
}

/// Where one input logical ends up, with its outcome-dependent sign.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Flow {
    pub input: String,
    pub image: PauliString,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verified {
    pub name: String,
    pub n_patches: usize,
    pub branches: usize,
    pub flows: Vec<Flow>,
    pub frame: Vec<FrameTerm>,
    pub outcomes: Vec<MeasurementOutcome>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Failure {
    Tableau { step: usize, error: SurgeryError },
    /// A logical still has support off the output patches.
    Leak { input: String },
    WrongImage { input: String, expected: String, found: String },
    /// The recorded signs admit no Pauli correction on this branch.
    NoCorrection,
    /// The supplied frame leaves a negative sign on this branch.
    FrameMismatch { input: String },
    InvariantBroken { step: usize },
    /// A joint measurement spans patches that share no boundary.
    NotAdjacent { step: usize },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Counterexample {
    pub name: String,
    /// Outcome bits of the failing branch, if the failure is branch-specific.
    pub branch: Option<u64>,
    pub failure: Failure,
}

impl fmt::Display for Counterexample {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {:?}", self.name, self.failure)?;
        if let Some(b) = self.branch {
            write!(f, " on branch {b:#b}")?;
        }
        Ok(())
    }
}

fn input_name(c: &Construction, k: usize) -> String {
    let letter = if k.is_multiple_of(2) { 'X' } else { 'Z' };
    format!("{letter}_{}", c.labels[c.inputs[k / 2]])
}

/// Runs the sequence symbolically, returning the final tableau.
pub fn run(c: &Construction, forced: Option<u64>) -> Result<StabilizerTableau, Counterexample> {
    let fail = |step, failure| Counterexample {
        name: c.name.clone(),
        branch: forced,
        failure: match failure {
            Some(error) => Failure::Tableau { step, error },
            None => Failure::InvariantBroken { step },
        },
    };
    let mut t = StabilizerTableau::new(c.n_patches(), &c.inputs, &c.init).map_err(|e| fail(0, Some(e)))?;
    for (i, s) in c.steps.iter().enumerate() {
        match s {
            Step::Measure(p) if !c.is_local(p) => {
                return Err(Counterexample {
                    name: c.name.clone(),
                    branch: forced,
                    failure: Failure::NotAdjacent { step: i },
                });
            }
            Step::Measure(p) => {
                let idx = t.outcomes.len();
                t.measure(p, forced.map(|b| b >> idx & 1 == 1))
                    .map_err(|e| fail(i, Some(e)))?;
            }
            Step::Gate(g) => t.apply(*g),
        }
        if !t.check_invariants() {
            return Err(fail(i, None));
        }
    }
    Ok(t)
}

/// Solves `anticommutes(F, images[r]) = signs[r]` for a frame `F` on `outputs`.
fn solve_frame(images: &[PauliString], signs: &[Parity], outputs: &[usize]) -> Result<Vec<FrameTerm>, Parity> {
    // Unknown 2j: X on outputs[j]; unknown 2j+1: Z on outputs[j].
    let mut rows: Vec<(u64, Parity)> = images
        .iter()
        .zip(signs)
        .map(|(e, &s)| {
            let coeff = outputs.iter().enumerate().fold(0u64, |m, (j, &p)| {
                m | (e.z >> p & 1) << (2 * j) | (e.x >> p & 1) << (2 * j + 1)
            });
            (coeff, s)
        })
        .collect();
    let n_unknowns = 2 * outputs.len();
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..n_unknowns {
        let Some(p) = (r..rows.len()).find(|&i| rows[i].0 >> col & 1 == 1) else {
            continue;
        };
        rows.swap(r, p);
        for i in 0..rows.len() {
            if i != r && rows[i].0 >> col & 1 == 1 {
                rows[i] = (rows[i].0 ^ rows[r].0, rows[i].1.xor(rows[r].1));
            }
        }
        pivots.push((col, r));
        r += 1;
    }
    if let Some(bad) = rows[r..].iter().find(|row| row.1 != Parity::default()) {
        return Err(bad.1);
    }
    Ok(pivots
        .into_iter()
        .filter(|(_, row)| rows[*row].1 != Parity::default())
        .map(|(col, row)| FrameTerm {
            patch: outputs[col / 2],
            letter: if col % 2 == 0 { 'X' } else { 'Z' },
            condition: rows[row].1,
        })
        .collect())
}

fn frame_at(frame: &[FrameTerm], bits: u64) -> PauliString {
    frame
        .iter()
        .filter(|t| t.condition.eval(bits))
        .fold(PauliString::identity(), |acc, t| acc.mul(&PauliString::single(t.patch, t.letter)))
}

/// Verifies `c` using the frame derived from its own outcome signs.
pub fn verify(c: &Construction) -> Result<Verified, Counterexample> {
    verify_with_frame(c, None)
}

/// Verifies `c`; when `frame` is given it replaces the derived correction.
pub fn verify_with_frame(c: &Construction, frame: Option<&[FrameTerm]>) -> Result<Verified, Counterexample> {
    let t = run(c, None)?;
    let n = c.n_patches();
    let fail = |branch, failure| Counterexample {
        name: c.name.clone(),
        branch,
        failure,
    };
    let expected = c.expected_images();
    let mut flows = Vec::new();
    for (k, e) in expected.iter().enumerate() {
        let (x, z) = t.logicals[k / 2];
        let tracked = if k.is_multiple_of(2) { x } else { z };
        let input = input_name(c, k);
        let Some(image) = t.reduce_onto(&tracked, c.output_mask()) else {
            return Err(fail(None, Failure::Leak { input }));
        };
        if !image.same_letters(e) || !image.is_hermitian() {
            return Err(fail(
                None,
                Failure::WrongImage {
                    input,
                    expected: e.letters(n),
                    found: image.to_string_n(n),
                },
            ));
        }
        flows.push(Flow { input, image });
    }
    let signs: Vec<Parity> = flows.iter().map(|f| f.image.sign()).collect();
    let frame = match frame {
        Some(f) => f.to_vec(),
        None => match solve_frame(&expected, &signs, &c.outputs) {
            Ok(f) => f,
            Err(obstruction) => {
                let branch = first_branch(&t, |b| obstruction.eval(b));
                return Err(fail(branch, Failure::NoCorrection));
            }
        },
    };

    let random: Vec<usize> = t.outcomes.iter().filter(|o| !o.deterministic).map(|o| o.index).collect();
    for combo in 0..1u64 << random.len() {
        let bits = spread(combo, &random);
        // A concrete replay with pinned outcomes must agree with the symbolic run.
        run(c, Some(bits))?;
        let f = frame_at(&frame, bits);
        for (k, (e, s)) in expected.iter().zip(&signs).enumerate() {
            if s.eval(bits) != !f.commutes(e) {
                return Err(fail(Some(bits), Failure::FrameMismatch { input: input_name(c, k) }));
            }
        }
    }
    Ok(Verified {
        name: c.name.clone(),
        n_patches: n,
        branches: 1 << random.len(),
        flows,
        frame,
        outcomes: t.outcomes,
    })
}

fn spread(combo: u64, positions: &[usize]) -> u64 {
    positions
        .iter()
        .enumerate()
        .fold(0, |acc, (i, &p)| acc | (combo >> i & 1) << p)
}

fn first_branch(t: &StabilizerTableau, bad: impl Fn(u64) -> bool) -> Option<u64> {
    let random: Vec<usize> = t.outcomes.iter().filter(|o| !o.deterministic).map(|o| o.index).collect();
    (0..1u64 << random.len()).map(|c| spread(c, &random)).find(|&b| bad(b))
}
