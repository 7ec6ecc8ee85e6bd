#![allow(dead_code)]

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use tpms_mesh::Cell;
use tpms_period::{solve_member, PeriodSolution, Strategy};
use tpms_weierstrass::FamilyParams;

/// Member with pitch close to one.
pub fn unit_member() -> &'static PeriodSolution {
    static MEMBER: OnceLock<PeriodSolution> = OnceLock::new();
    MEMBER.get_or_init(|| {
        solve_member(FamilyParams::new(0.2, 0.0375, 2.42).unwrap(), Strategy::FixEta).expect("member converges")
    })
}

pub fn unit_cell(resolution: usize) -> Arc<Cell> {
    static CELLS: OnceLock<Mutex<HashMap<usize, Arc<Cell>>>> = OnceLock::new();
    let cells = CELLS.get_or_init(Default::default);
    if let Some(c) = cells.lock().unwrap().get(&resolution) {
        return c.clone();
    }
    let cell = Arc::new(Cell::from_solution(unit_member(), resolution).expect("cell builds"));
    cells.lock().unwrap().entry(resolution).or_insert(cell).clone()
}
