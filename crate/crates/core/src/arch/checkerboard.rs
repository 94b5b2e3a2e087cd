//! Physical geometry of the checkerboard plane.
//!
//! Data and ancilla patches alternate like the squares of a chessboard. The
//! logical `R x C` data grid sits rotated by 45 degrees inside it: logical
//! neighbors are diagonal physical neighbors, and a CNOT between them merges
//! through the upper of the two ancilla patches both touch.

use super::Location;

/// Physical patch coordinate: `row` grows downwards.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize, serde::Deserialize)]
pub struct Cell {
    pub row: i32,
    pub col: i32,
}

impl Cell {
    pub fn new(row: i32, col: i32) -> Self {
        Cell { row, col }
    }

    pub fn is_data(self) -> bool {
        (self.row + self.col).rem_euclid(2) == 0
    }

    pub fn diagonal_to(self, other: Cell) -> bool {
        (self.row - other.row).abs() == 1 && (self.col - other.col).abs() == 1
    }
}

/// Ancilla shared by two diagonally adjacent data cells: of the two cells
/// touching both, the one in the upper row.
pub fn upper_ancilla(a: Cell, b: Cell) -> Option<Cell> {
    if !a.is_data() || !b.is_data() || !a.diagonal_to(b) {
        return None;
    }
    let c1 = Cell::new(a.row, b.col);
    let c2 = Cell::new(b.row, a.col);
    Some(if c1.row <= c2.row { c1 } else { c2 })
}

/// Physical cell of logical data location `l` in a grid with `cols` columns.
pub fn embed(l: Location, cols: u32) -> Cell {
    let (r, c) = (l.row as i32, l.col as i32);
    // Smallest even offset keeping every column non-negative.
    let shift = (cols as i32) & !1;
    Cell::new(r + c, r - c + shift)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// A 4 x 6 staggered board numbered row-major, data and ancilla cells
    /// separately and 1-based.
    struct Board {
        rows: i32,
        cols: i32,
    }

    impl Board {
        fn cells(&self, data: bool) -> Vec<Cell> {
            let mut v = Vec::new();
            for r in 0..self.rows {
                for c in 0..self.cols {
                    let cell = Cell::new(r, c);
                    if cell.is_data() == data {
                        v.push(cell);
                    }
                }
            }
            v
        }
        fn data(&self, n: usize) -> Cell {
            self.cells(true)[n - 1]
        }
        fn number(&self, cell: Cell) -> usize {
            let set = self.cells(cell.is_data());
            set.iter().position(|&c| c == cell).unwrap() + 1
        }
        fn neighbors(&self, n: usize) -> Vec<usize> {
            let a = self.data(n);
            let mut v: Vec<usize> = self
                .cells(true)
                .into_iter()
                .filter(|&b| a.diagonal_to(b))
                .map(|b| self.number(b))
                .collect();
            v.sort();
            v
        }
    }

    const BOARD: Board = Board { rows: 4, cols: 6 };

    #[test]
    fn interior_patch_has_four_diagonal_neighbors() {
        assert_eq!(BOARD.neighbors(8), vec![4, 5, 10, 11]);
    }

    #[test]
    fn upper_ancilla_examples() {
        let anc = |a, b| BOARD.number(upper_ancilla(BOARD.data(a), BOARD.data(b)).unwrap());
        assert_eq!(anc(2, 4), 1);
        assert_eq!(anc(2, 5), 2);
        assert_eq!(anc(4, 2), 1);
    }

    #[test]
    fn embedding_maps_neighbors_to_diagonals() {
        let cols = 4;
        for r in 0..3u32 {
            for c in 0..cols {
                let a = embed(Location::new(r, c), cols);
                assert!(a.is_data());
                assert!(a.col >= 0);
                if c + 1 < cols {
                    assert!(a.diagonal_to(embed(Location::new(r, c + 1), cols)));
                }
                assert!(a.diagonal_to(embed(Location::new(r + 1, c), cols)));
                if c > 0 {
                    assert!(!a.diagonal_to(embed(Location::new(r + 1, c - 1), cols)));
                }
            }
        }
    }

    #[test]
    fn non_diagonal_pairs_have_no_ancilla() {
        assert_eq!(upper_ancilla(Cell::new(0, 0), Cell::new(0, 2)), None);
        assert_eq!(upper_ancilla(Cell::new(0, 0), Cell::new(0, 1)), None);
    }
}
