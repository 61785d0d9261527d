//! The 24 Hurwitz units and their multiplication table.

use hurwitz_packing::HurwitzInteger;

fn main() {
    let units = HurwitzInteger::units();
    for u in &units {
        println!("{u:?}");
    }
    let closed = units.iter().all(|a| units.iter().all(|b| units.contains(&(*a * *b))));
    println!("{} units, closed under multiplication: {closed}", units.len());
    let counts = HurwitzInteger::count_by_norm(10);
    for (n, c) in counts.iter().enumerate().skip(1) {
        println!("norm {n:>2}: {c}");
    }
}
