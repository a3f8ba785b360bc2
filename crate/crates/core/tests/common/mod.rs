use partiti_core::grid::neighbors;
use partiti_core::{AssignmentGrid, ClueGrid, DigitSet, GridDims};
use rand::Rng;

/// A valid full assignment drawn cell by cell, restarting on dead ends.
pub fn random_valid_assignment(dims: GridDims, rng: &mut impl Rng) -> AssignmentGrid {
    'restart: loop {
        let mut grid = AssignmentGrid::empty(dims);
        for cell in dims.cells() {
            let mut allowed = DigitSet::ALL;
            for n in neighbors(dims, cell).expect("cell in grid") {
                allowed = allowed.difference(grid.get(n));
            }
            if allowed.is_empty() {
                continue 'restart;
            }
            let digits = allowed.to_vec();
            let set = loop {
                let s = DigitSet::from_digits(digits.iter().copied().filter(|_| rng.random_bool(0.4))).unwrap();
                if !s.is_empty() {
                    break s;
                }
            };
            grid.set(cell, set);
        }
        return grid;
    }
}

pub fn clues_of(assignment: &AssignmentGrid) -> ClueGrid {
    ClueGrid::new(
        assignment.dims(),
        assignment.as_slice().iter().map(|s| s.sum()).collect(),
    )
    .unwrap()
}
