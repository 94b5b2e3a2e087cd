//! Checkerboard and tile-based qubit planes.

pub mod checkerboard;

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use checkerboard::{embed, upper_ancilla, Cell};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ArchKind {
    Checkerboard,
    TileBased,
}

impl ArchKind {
    pub fn short(self) -> &'static str {
        match self {
            ArchKind::Checkerboard => "c",
            ArchKind::TileBased => "t",
        }
    }
}

impl fmt::Display for ArchKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ArchKind::Checkerboard => "c-arch",
            ArchKind::TileBased => "t-arch",
        })
    }
}

impl FromStr for ArchKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "c" | "checkerboard" => Ok(ArchKind::Checkerboard),
            "t" | "tile" => Ok(ArchKind::TileBased),
            other => Err(format!("unknown architecture `{other}`")),
        }
    }
}

/// A data location: a data patch on the checkerboard, a tile otherwise.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Location {
    pub row: u32,
    pub col: u32,
}

impl Location {
    pub const fn new(row: u32, col: u32) -> Self {
        Location { row, col }
    }

    pub fn manhattan(self, other: Location) -> u32 {
        self.row.abs_diff(other.row) + self.col.abs_diff(other.col)
    }
}

impl fmt::Display for Location {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.row, self.col)
    }
}

/// Patch inside a tile: A top-left, B top-right, C bottom-left, D bottom-right.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Corner {
    A,
    B,
    C,
    D,
}

/// Anything two primitives can contend for.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Resource {
    Data(Location),
    Ancilla(Cell),
    TilePatch(Location, Corner),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PrimitiveKind {
    Single,
    Cnot,
    Swap,
}

/// One operation placed in time on the plane.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrimitiveOp {
    pub kind: PrimitiveKind,
    pub locs: Vec<Location>,
    pub start: u64,
    pub duration: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ArchError {
    #[error("location {0} is outside the grid")]
    OutOfGrid(Location),
    #[error("locations {0} and {1} are not neighbors")]
    NotNeighbors(Location, Location),
    #[error("swap between two empty locations {0} and {1}")]
    EmptySwap(Location, Location),
    #[error("grid must have at least one row and column")]
    EmptyGrid,
    #[error("qubit {0} placed twice")]
    DuplicateQubit(u32),
}

/// Qubit plane with its current occupancy.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Architecture {
    pub kind: ArchKind,
    pub rows: u32,
    pub cols: u32,
    occupancy: Vec<Option<u32>>,
}

impl Architecture {
    pub fn new(kind: ArchKind, rows: u32, cols: u32) -> Result<Self, ArchError> {
        if rows == 0 || cols == 0 {
            return Err(ArchError::EmptyGrid);
        }
        Ok(Architecture {
            kind,
            rows,
            cols,
            occupancy: vec![None; (rows * cols) as usize],
        })
    }

    pub fn n_locations(&self) -> usize {
        self.occupancy.len()
    }

    pub fn contains(&self, l: Location) -> bool {
        l.row < self.rows && l.col < self.cols
    }

    fn check(&self, l: Location) -> Result<(), ArchError> {
        if self.contains(l) {
            Ok(())
        } else {
            Err(ArchError::OutOfGrid(l))
        }
    }

    /// Row-major index of a location.
    pub fn index(&self, l: Location) -> usize {
        (l.row * self.cols + l.col) as usize
    }

    pub fn location(&self, index: usize) -> Location {
        Location::new(index as u32 / self.cols, index as u32 % self.cols)
    }

    pub fn locations(&self) -> impl Iterator<Item = Location> + '_ {
        (0..self.n_locations()).map(|i| self.location(i))
    }

    fn offsets(&self) -> &'static [(i64, i64)] {
        const VON_NEUMANN: [(i64, i64); 4] = [(-1, 0), (0, -1), (0, 1), (1, 0)];
        const TILE: [(i64, i64); 6] = [(-1, -1), (-1, 0), (0, -1), (0, 1), (1, 0), (1, 1)];
        match self.kind {
            ArchKind::Checkerboard => &VON_NEUMANN,
            ArchKind::TileBased => &TILE,
        }
    }

    fn shifted(&self, l: Location, offsets: &[(i64, i64)]) -> Vec<Location> {
        offsets
            .iter()
            .filter_map(|&(dr, dc)| {
                let r = l.row as i64 + dr;
                let c = l.col as i64 + dc;
                (r >= 0 && c >= 0 && r < self.rows as i64 && c < self.cols as i64)
                    .then(|| Location::new(r as u32, c as u32))
            })
            .collect()
    }

    /// Locations a CNOT from `l` can reach directly, in row-major order.
    pub fn neighbors(&self, l: Location) -> Result<Vec<Location>, ArchError> {
        self.check(l)?;
        Ok(self.shifted(l, self.offsets()))
    }

    pub fn are_neighbors(&self, a: Location, b: Location) -> bool {
        self.contains(a) && self.contains(b) && self.shifted(a, self.offsets()).contains(&b)
    }

    /// Locations a SWAP from `l` can reach: von Neumann neighbors on both planes.
    pub fn swap_neighbors(&self, l: Location) -> Result<Vec<Location>, ArchError> {
        self.check(l)?;
        Ok(self.shifted(l, &[(-1, 0), (0, -1), (0, 1), (1, 0)]))
    }

    pub fn are_swap_neighbors(&self, a: Location, b: Location) -> bool {
        self.contains(a) && self.contains(b) && a.manhattan(b) == 1
    }

    /// Ancilla patches a two-qubit primitive between `a` and `b` occupies.
    pub fn ancilla_for_cnot(&self, a: Location, b: Location) -> Result<Vec<Resource>, ArchError> {
        self.check(a)?;
        self.check(b)?;
        if !self.are_neighbors(a, b) {
            return Err(ArchError::NotNeighbors(a, b));
        }
        let (a, b) = (a.min(b), a.max(b));
        Ok(match self.kind {
            ArchKind::Checkerboard => {
                let cell = upper_ancilla(embed(a, self.cols), embed(b, self.cols))
                    .expect("logical neighbors embed diagonally");
                vec![Resource::Ancilla(cell)]
            }
            ArchKind::TileBased => {
                use Corner::*;
                let p = Resource::TilePatch;
                if a.row == b.row {
                    vec![p(a, B), p(a, D), p(b, A), p(b, C)]
                } else if a.col == b.col {
                    vec![p(a, C), p(a, D), p(b, A), p(b, B)]
                } else {
                    let right = Location::new(a.row, b.col);
                    let below = Location::new(b.row, a.col);
                    vec![p(a, D), p(right, C), p(below, B), p(b, A)]
                }
            }
        })
    }

    /// Every resource an operation holds for its duration.
    pub fn reservations(&self, op: &PrimitiveOp) -> Result<BTreeSet<Resource>, ArchError> {
        let mut set: BTreeSet<Resource> = op.locs.iter().map(|&l| Resource::Data(l)).collect();
        for &l in &op.locs {
            self.check(l)?;
        }
        if op.kind != PrimitiveKind::Single {
            let [a, b] = op.locs[..] else {
                return Err(ArchError::OutOfGrid(op.locs.first().copied().unwrap_or(Location::new(0, 0))));
            };
            if op.kind == PrimitiveKind::Swap && !self.are_swap_neighbors(a, b) {
                return Err(ArchError::NotNeighbors(a, b));
            }
            set.extend(self.ancilla_for_cnot(a, b)?);
        }
        Ok(set)
    }

    /// True iff both operations overlap in time and share a reserved resource.
    pub fn conflicts(&self, x: &PrimitiveOp, y: &PrimitiveOp) -> Result<bool, ArchError> {
        let overlap = x.start < y.start + y.duration && y.start < x.start + x.duration;
        if !overlap {
            return Ok(false);
        }
        let rx = self.reservations(x)?;
        let ry = self.reservations(y)?;
        Ok(!rx.is_disjoint(&ry))
    }

    /// Ancilla patches of the checkerboard footprint: every ancilla sharing an
    /// edge with a data patch of the grid, an `(R+1) x (C+1)` ring-closed lattice.
    pub fn checkerboard_ancillas(&self) -> BTreeSet<Cell> {
        let mut set = BTreeSet::new();
        for l in self.locations() {
            let d = embed(l, self.cols);
            for (dr, dc) in [(-1, 0), (0, -1), (0, 1), (1, 0)] {
                set.insert(Cell::new(d.row + dr, d.col + dc));
            }
        }
        set
    }

    /// Data patches over all patches of the footprint.
    pub fn qubit_efficiency(&self) -> f64 {
        let data = self.n_locations() as f64;
        match self.kind {
            ArchKind::TileBased => data / (4.0 * data),
            ArchKind::Checkerboard => data / (data + self.checkerboard_ancillas().len() as f64),
        }
    }

    pub fn occupant(&self, l: Location) -> Option<u32> {
        self.occupancy.get(self.index(l)).copied().flatten()
    }

    pub fn location_of(&self, q: u32) -> Option<Location> {
        self.occupancy
            .iter()
            .position(|&o| o == Some(q))
            .map(|i| self.location(i))
    }

    pub fn occupancy(&self) -> &[Option<u32>] {
        &self.occupancy
    }

    pub fn clear(&mut self) {
        self.occupancy.iter_mut().for_each(|o| *o = None);
    }

    /// Places qubit `i` at `locs[i]`, clearing any earlier occupancy.
    pub fn place(&mut self, locs: &[Location]) -> Result<(), ArchError> {
        self.clear();
        for (q, &l) in locs.iter().enumerate() {
            self.check(l)?;
            let i = self.index(l);
            if self.occupancy[i].is_some() {
                return Err(ArchError::DuplicateQubit(q as u32));
            }
            self.occupancy[i] = Some(q as u32);
        }
        Ok(())
    }

    /// Exchanges the states of two swap-adjacent locations; empty moves too.
    pub fn apply_swap(&mut self, a: Location, b: Location) -> Result<(), ArchError> {
        self.check(a)?;
        self.check(b)?;
        if !self.are_swap_neighbors(a, b) {
            return Err(ArchError::NotNeighbors(a, b));
        }
        let (i, j) = (self.index(a), self.index(b));
        if self.occupancy[i].is_none() && self.occupancy[j].is_none() {
            return Err(ArchError::EmptySwap(a, b));
        }
        self.occupancy.swap(i, j);
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tile_number(a: &Architecture, l: Location) -> usize {
        a.index(l) + 1
    }

    #[test]
    fn tile_center_has_six_neighbors() {
        let a = Architecture::new(ArchKind::TileBased, 3, 3).unwrap();
        let n: Vec<usize> = a
            .neighbors(Location::new(1, 1))
            .unwrap()
            .into_iter()
            .map(|l| tile_number(&a, l))
            .collect();
        assert_eq!(n, vec![1, 2, 4, 6, 8, 9]);
    }

    #[test]
    fn corners_are_clipped() {
        let c = Architecture::new(ArchKind::Checkerboard, 3, 3).unwrap();
        assert_eq!(c.neighbors(Location::new(0, 0)).unwrap().len(), 2);
        let t = Architecture::new(ArchKind::TileBased, 3, 3).unwrap();
        assert_eq!(t.neighbors(Location::new(0, 0)).unwrap().len(), 3);
        assert_eq!(t.neighbors(Location::new(0, 2)).unwrap().len(), 2);
        assert!(c.neighbors(Location::new(3, 0)).is_err());
    }

    #[test]
    fn diagonal_tile_cnots_conflict() {
        let a = Architecture::new(ArchKind::TileBased, 3, 3).unwrap();
        let l = |n: usize| a.location(n - 1);
        let op = |x, y| PrimitiveOp {
            kind: PrimitiveKind::Cnot,
            locs: vec![l(x), l(y)],
            start: 0,
            duration: 12,
        };
        // Tiles 2 and 4 are not neighbors, but the junction they would use is held by 1-5.
        let ra = a.reservations(&op(1, 5)).unwrap();
        let junction = a
            .ancilla_for_cnot(l(1), l(5))
            .unwrap()
            .into_iter()
            .collect::<BTreeSet<_>>();
        assert!(junction.is_subset(&ra));
        assert!(a.ancilla_for_cnot(l(2), l(4)).is_err());
        assert!(junction.contains(&Resource::TilePatch(l(2), Corner::C)));
        assert!(junction.contains(&Resource::TilePatch(l(4), Corner::B)));
    }

    #[test]
    fn checkerboard_conflicts() {
        let a = Architecture::new(ArchKind::Checkerboard, 3, 4).unwrap();
        let op = |x: Location, y: Location, start| PrimitiveOp {
            kind: PrimitiveKind::Cnot,
            locs: vec![x, y],
            start,
            duration: 9,
        };
        let l = Location::new;
        assert!(a.conflicts(&op(l(0, 0), l(0, 1), 0), &op(l(0, 0), l(1, 0), 0)).unwrap());
        assert!(!a.conflicts(&op(l(0, 0), l(0, 1), 0), &op(l(2, 2), l(2, 3), 0)).unwrap());
        assert!(!a.conflicts(&op(l(0, 0), l(0, 1), 0), &op(l(0, 0), l(1, 0), 9)).unwrap());
    }

    #[test]
    fn efficiency() {
        for n in 1..6 {
            let t = Architecture::new(ArchKind::TileBased, n, n + 1).unwrap();
            assert_eq!(t.qubit_efficiency(), 0.25);
        }
        let one = Architecture::new(ArchKind::Checkerboard, 1, 1).unwrap();
        assert_eq!(one.qubit_efficiency(), 0.2);
        let c = Architecture::new(ArchKind::Checkerboard, 16, 12).unwrap();
        let ring = c.checkerboard_ancillas();
        assert_eq!(ring.len(), 17 * 13);
        // Every CNOT ancilla lies inside the footprint.
        for l in c.locations() {
            for n in c.neighbors(l).unwrap() {
                for r in c.ancilla_for_cnot(l, n).unwrap() {
                    let Resource::Ancilla(cell) = r else { panic!() };
                    assert!(ring.contains(&cell));
                }
            }
        }
    }

    #[test]
    fn swap_moves_and_is_an_involution() {
        let mut a = Architecture::new(ArchKind::Checkerboard, 2, 2).unwrap();
        a.place(&[Location::new(0, 0), Location::new(0, 1)]).unwrap();
        let before = a.clone();
        a.apply_swap(Location::new(0, 0), Location::new(1, 0)).unwrap();
        assert_eq!(a.location_of(0), Some(Location::new(1, 0)));
        a.apply_swap(Location::new(0, 0), Location::new(1, 0)).unwrap();
        assert_eq!(a, before);
        assert!(a.apply_swap(Location::new(1, 0), Location::new(1, 1)).is_err());
        assert!(a.apply_swap(Location::new(0, 0), Location::new(1, 1)).is_err());
    }
}
