use super::{verify, Basis, Construction, Counterexample, Ideal, PauliString, Step, Verified};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CnotVariant {
    /// Ancilla in `|0>`: M_XX(A,T), M_ZZ(C,A), M_X(A).
    AncillaZero,
    /// Ancilla in `|+>`: M_ZZ(C,A), M_XX(A,T), M_Z(A).
    AncillaPlus,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MoveKind {
    Horizontal,
    Vertical,
    Corner,
}

/// Joint measurement of `letter` on every listed patch.
fn m(letter: char, patches: &[usize]) -> Step {
    let mut p = PauliString::identity();
    for &q in patches {
        p.set(q, letter);
    }
    Step::Measure(p)
}

fn labels(names: &[&str]) -> Vec<String> {
    names.iter().map(|s| s.to_string()).collect()
}

/// Patches ordered C, A, T.
pub fn cnot_construction(v: CnotVariant) -> Construction {
    let (c, a, t) = (0, 1, 2);
    let (name, basis, steps) = match v {
        CnotVariant::AncillaZero => (
            "cnot |0> ancilla",
            Basis::Zero,
            vec![m('X', &[a, t]), m('Z', &[c, a]), m('X', &[a])],
        ),
        CnotVariant::AncillaPlus => (
            "cnot |+> ancilla",
            Basis::Plus,
            vec![m('Z', &[c, a]), m('X', &[a, t]), m('Z', &[a])],
        ),
    };
    Construction {
        name: name.into(),
        labels: labels(&["C", "A", "T"]),
        inputs: vec![c, t],
        outputs: vec![c, t],
        init: vec![(a, basis)],
        steps,
        ideal: Ideal::Cnot,
        adjacent: vec![(c, a), (a, t)],
    }
}

pub fn move_construction(kind: MoveKind) -> Construction {
    match kind {
        MoveKind::Horizontal => Construction {
            name: "horizontal move".into(),
            labels: labels(&["A", "B"]),
            inputs: vec![0],
            outputs: vec![1],
            init: vec![(1, Basis::Zero)],
            steps: vec![m('X', &[0, 1]), m('Z', &[0])],
            ideal: Ideal::Identity,
            adjacent: vec![(0, 1)],
        },
        MoveKind::Vertical => Construction {
            name: "vertical move".into(),
            labels: labels(&["A", "C"]),
            inputs: vec![0],
            outputs: vec![1],
            init: vec![(1, Basis::Plus)],
            steps: vec![m('Z', &[0, 1]), m('X', &[0])],
            ideal: Ideal::Identity,
            adjacent: vec![(0, 1)],
        },
        // A vertical move A -> B interleaved with a horizontal move B -> D.
        MoveKind::Corner => Construction {
            name: "corner move".into(),
            labels: labels(&["A", "B", "D"]),
            inputs: vec![0],
            outputs: vec![2],
            init: vec![(1, Basis::Plus), (2, Basis::Zero)],
            steps: vec![m('Z', &[0, 1]), m('X', &[1, 2]), m('X', &[0]), m('Z', &[1])],
            ideal: Ideal::Identity,
            adjacent: vec![(0, 1), (1, 2)],
        },
    }
}

/// The corner move exactly as its figure caption states it: B in `|0>`,
/// D in `|+>`, then M_ZZ(A,B), M_XX(B,D), M_X(A).
pub fn corner_move_as_captioned() -> Construction {
    Construction {
        name: "corner move (caption)".into(),
        labels: labels(&["A", "B", "D"]),
        inputs: vec![0],
        outputs: vec![2],
        init: vec![(1, Basis::Zero), (2, Basis::Plus)],
        steps: vec![m('Z', &[0, 1]), m('X', &[1, 2]), m('X', &[0])],
        ideal: Ideal::Identity,
        adjacent: vec![(0, 1), (1, 2)],
    }
}

/// Two horizontally adjacent tiles, patches A1 B1 C1 D1 A2 B2 C2 D2,
/// laid out as
///
/// ```text
/// A1 B1 | A2 B2
/// C1 D1 | C2 D2
/// ```
const TILE_LABELS: [&str; 8] = ["A1", "B1", "C1", "D1", "A2", "B2", "C2", "D2"];
const A1: usize = 0;
const B1: usize = 1;
const C1: usize = 2;
const D1: usize = 3;
const A2: usize = 4;
const B2: usize = 5;
const C2: usize = 6;
const D2: usize = 7;

fn tile_adjacency() -> Vec<(usize, usize)> {
    vec![
        (A1, B1),
        (B1, A2),
        (A2, B2),
        (C1, D1),
        (D1, C2),
        (C2, D2),
        (A1, C1),
        (B1, D1),
        (A2, C2),
        (B2, D2),
    ]
}

fn tile_init(busy: &[usize]) -> Vec<(usize, Basis)> {
    (0..8)
        .filter(|p| !busy.contains(p))
        .map(|p| (p, Basis::Zero))
        .collect()
}

/// Exchanges the states in A1 and D2 of two neighboring tiles; they end in
/// A2 and D1.
pub fn tswap_construction() -> Construction {
    Construction {
        name: "t-SWAP".into(),
        labels: labels(&TILE_LABELS),
        inputs: vec![A1, D2],
        outputs: vec![A2, D1],
        init: tile_init(&[A1, D2]),
        steps: vec![
            m('X', &[A1, B1]),
            m('X', &[D2, C2]),
            m('X', &[B1, A2]),
            m('X', &[C2, D1]),
            m('Z', &[D2]),
            m('Z', &[A1]),
            m('Z', &[B1]),
            m('Z', &[C2]),
        ],
        ideal: Ideal::Identity,
        adjacent: tile_adjacency(),
    }
}

/// CNOT from A1 onto D2 through the corridor between the tiles; control
/// ends in B1, target in C2, D1 is the surgery ancilla.
pub fn tcnot_construction() -> Construction {
    Construction {
        name: "t-CNOT".into(),
        labels: labels(&TILE_LABELS),
        inputs: vec![A1, D2],
        outputs: vec![B1, C2],
        init: tile_init(&[A1, D2]),
        steps: vec![
            m('X', &[A1, B1]),
            m('X', &[D2, C2]),
            m('Z', &[A1]),
            m('Z', &[D2]),
            m('X', &[D1, C2]),
            m('Z', &[B1, D1]),
            m('X', &[D1]),
        ],
        ideal: Ideal::Cnot,
        adjacent: tile_adjacency(),
    }
}

/// No steps on two unentangled tiles.
pub fn identity_construction() -> Construction {
    Construction {
        name: "idle tiles".into(),
        labels: labels(&TILE_LABELS),
        inputs: vec![A1, D2],
        outputs: vec![A1, D2],
        init: tile_init(&[A1, D2]),
        steps: Vec::new(),
        ideal: Ideal::Identity,
        adjacent: tile_adjacency(),
    }
}

pub fn verify_cnot_construction(v: CnotVariant) -> Result<Verified, Counterexample> {
    verify(&cnot_construction(v))
}

pub fn verify_move(kind: MoveKind) -> Result<Verified, Counterexample> {
    verify(&move_construction(kind))
}

pub fn verify_tswap() -> Result<Verified, Counterexample> {
    verify(&tswap_construction())
}

pub fn verify_tcnot() -> Result<Verified, Counterexample> {
    verify(&tcnot_construction())
}

/// Every documented construction.
pub fn all_constructions() -> Vec<Construction> {
    vec![
        cnot_construction(CnotVariant::AncillaZero),
        cnot_construction(CnotVariant::AncillaPlus),
        move_construction(MoveKind::Horizontal),
        move_construction(MoveKind::Vertical),
        move_construction(MoveKind::Corner),
        tswap_construction(),
        tcnot_construction(),
        identity_construction(),
    ]
}

pub fn verify_all() -> Vec<(String, Result<Verified, Counterexample>)> {
    all_constructions()
        .into_iter()
        .map(|c| (c.name.clone(), verify(&c)))
        .collect()
}

/// Single-step mutants: each measurement deleted, flipped between X and Z
/// basis, or with one patch moved to the next patch not already measured.
pub fn mutants(c: &Construction) -> Vec<(String, Construction)> {
    let n = c.n_patches();
    let mut out = Vec::new();
    for (i, s) in c.steps.iter().enumerate() {
        let Step::Measure(p) = s else { continue };
        let what = c.describe_step(s);

        let mut del = c.clone();
        del.steps.remove(i);
        out.push((format!("delete {what}"), del));

        let mut flip = c.clone();
        let mut q = *p;
        std::mem::swap(&mut q.x, &mut q.z);
        flip.steps[i] = Step::Measure(q);
        out.push((format!("flip {what}"), flip));

        for patch in (0..n).filter(|&j| p.support() >> j & 1 == 1) {
            let Some(to) = (1..n).map(|k| (patch + k) % n).find(|&j| p.support() >> j & 1 == 0) else {
                continue;
            };
            let mut q = *p;
            let letter = q.letter(patch);
            q.set(patch, 'I');
            q.set(to, letter);
            let mut re = c.clone();
            re.steps[i] = Step::Measure(q);
            out.push((format!("retarget {what} {} -> {}", c.labels[patch], c.labels[to]), re));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surgery::{verify_with_frame, Failure, FrameTerm, Parity};

    fn flow(v: &Verified, input: &str) -> String {
        let f = v.flows.iter().find(|f| f.input == input).unwrap();
        f.image.to_string_n(v.n_patches)
    }

    #[test]
    fn cnot_zero_ancilla_flow_table() {
        let v = verify_cnot_construction(CnotVariant::AncillaZero).unwrap();
        assert_eq!(v.branches, 8);
        // Measurements m0 = M_IXX, m1 = M_ZZI, m2 = M_IXI.
        assert_eq!(flow(&v, "Z_T"), "(-1)^(m1) ZIZ");
        assert_eq!(flow(&v, "X_C"), "(-1)^(m0+m2) XIX");
        assert_eq!(flow(&v, "Z_C"), "ZII");
        assert_eq!(flow(&v, "X_T"), "IIX");
    }

    #[test]
    fn cnot_plus_ancilla_flow_table() {
        let v = verify_cnot_construction(CnotVariant::AncillaPlus).unwrap();
        assert_eq!(v.branches, 8);
        // m0 = M_ZZI, m1 = M_IXX, m2 = M_IZI.
        assert_eq!(flow(&v, "Z_T"), "(-1)^(m0+m2) ZIZ");
        assert_eq!(flow(&v, "X_C"), "(-1)^(m1) XIX");
    }

    #[test]
    fn plus_variant_zero_branch_maps_x_to_xx() {
        let v = verify_cnot_construction(CnotVariant::AncillaPlus).unwrap();
        let f = v.flows.iter().find(|f| f.input == "X_C").unwrap();
        assert!(!f.image.sign().eval(0));
        assert_eq!(f.image.letters(3), "XIX");
    }

    #[test]
    fn horizontal_move_matches_flow_table() {
        let v = verify_move(MoveKind::Horizontal).unwrap();
        assert_eq!(flow(&v, "X_A"), "(-1)^(m0) IX");
        assert_eq!(flow(&v, "Z_A"), "(-1)^(m1) IZ");
    }

    #[test]
    fn vertical_move_matches_flow_table() {
        let v = verify_move(MoveKind::Vertical).unwrap();
        assert_eq!(flow(&v, "X_A"), "(-1)^(m1) IX");
        assert_eq!(flow(&v, "Z_A"), "(-1)^(m0) IZ");
    }

    #[test]
    fn corner_move_composes_both_moves() {
        let v = verify_move(MoveKind::Corner).unwrap();
        assert_eq!(v.branches, 16);
        // X picks up the horizontal move's XX outcome and the vertical move's
        // X outcome; Z the vertical ZZ and the horizontal Z outcome.
        assert_eq!(flow(&v, "X_A"), "(-1)^(m1+m2) IIX");
        assert_eq!(flow(&v, "Z_A"), "(-1)^(m0+m3) IIZ");
    }

    #[test]
    fn captioned_corner_move_collapses_the_state() {
        let err = verify(&corner_move_as_captioned()).unwrap_err();
        assert!(matches!(err.failure, Failure::Tableau { step: 0, .. }));
    }

    #[test]
    fn tile_sequences_verify() {
        assert_eq!(verify_tswap().unwrap().branches, 256);
        assert_eq!(verify_tcnot().unwrap().branches, 128);
        let idle = verify(&identity_construction()).unwrap();
        assert_eq!(idle.branches, 1);
        assert!(idle.frame.is_empty());
    }

    #[test]
    fn every_construction_verifies() {
        for (name, r) in verify_all() {
            assert!(r.is_ok(), "{name}: {}", r.unwrap_err());
        }
    }

    #[test]
    fn every_single_step_mutant_fails() {
        for c in all_constructions() {
            for (what, mutant) in mutants(&c) {
                assert!(verify(&mutant).is_err(), "{}: mutant '{what}' passed", c.name);
            }
        }
    }

    #[test]
    fn wrong_correction_is_reported() {
        let c = cnot_construction(CnotVariant::AncillaZero);
        let good = verify(&c).unwrap().frame;
        assert!(verify_with_frame(&c, Some(&good)).is_ok());
        let mut bad = good.clone();
        bad[0].condition = bad[0].condition.xor(Parity::bit(0));
        let err = verify_with_frame(&c, Some(&bad)).unwrap_err();
        assert!(matches!(err.failure, Failure::FrameMismatch { .. }));
        assert!(err.branch.is_some());
        let none: Vec<FrameTerm> = Vec::new();
        assert!(verify_with_frame(&c, Some(&none)).is_err());
    }
}
