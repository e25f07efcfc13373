#![allow(dead_code)]

use squared_squares::{Dissection, SquareElement};

/// Builds a tiling by repeatedly covering the lowest-leftmost empty cell
/// with a square whose size is picked by the next seed.
pub fn seeded_tiling(n: u32, seeds: &[u32]) -> Dissection {
    let mut filled = vec![false; (n * n) as usize];
    let mut elements = Vec::new();
    let mut next = seeds.iter().cycle();
    while let Some(i) = filled.iter().position(|&f| !f) {
        let (x, y) = (i as u32 % n, i as u32 / n);
        let mut room = 0;
        while x + room < n && y + room < n && !filled[(y * n + x + room) as usize] {
            room += 1;
        }
        let s = 1 + next.next().copied().unwrap_or(0) % room;
        for cy in y..y + s {
            for cx in x..x + s {
                filled[(cy * n + cx) as usize] = true;
            }
        }
        elements.push(SquareElement::new(x, y, s));
    }
    Dissection::new(n, elements).expect("seeded fill is an exact cover")
}
