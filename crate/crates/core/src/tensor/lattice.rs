use serde::{Deserialize, Serialize};

/// Virtual legs in their normative order. Absent legs are skipped in the
/// flattened tensor layout.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Leg {
    Up,
    Right,
    Down,
    Left,
}

impl Leg {
    pub const ALL: [Leg; 4] = [Leg::Up, Leg::Right, Leg::Down, Leg::Left];

    pub fn slot(self) -> usize {
        self as usize
    }
}

/// Open-boundary `width x height` square lattice. Vertex `v = y * width + x`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LatticeSpec {
    pub width: usize,
    pub height: usize,
}

impl LatticeSpec {
    pub fn new(width: usize, height: usize) -> Self {
        assert!(width >= 1 && height >= 1, "lattice must have at least one vertex");
        LatticeSpec { width, height }
    }

    pub fn n(&self) -> usize {
        self.width * self.height
    }

    pub fn coords(&self, v: usize) -> (usize, usize) {
        (v % self.width, v / self.width)
    }

    pub fn index(&self, x: usize, y: usize) -> usize {
        y * self.width + x
    }

    pub fn has_leg(&self, v: usize, leg: Leg) -> bool {
        let (x, y) = self.coords(v);
        match leg {
            Leg::Up => y > 0,
            Leg::Right => x + 1 < self.width,
            Leg::Down => y + 1 < self.height,
            Leg::Left => x > 0,
        }
    }

    pub fn legs(&self, v: usize) -> Vec<Leg> {
        Leg::ALL.into_iter().filter(|&l| self.has_leg(v, l)).collect()
    }

    pub fn degree(&self, v: usize) -> usize {
        self.legs(v).len()
    }

    pub fn neighbor(&self, v: usize, leg: Leg) -> Option<usize> {
        if !self.has_leg(v, leg) {
            return None;
        }
        Some(match leg {
            Leg::Up => v - self.width,
            Leg::Right => v + 1,
            Leg::Down => v + self.width,
            Leg::Left => v - 1,
        })
    }

    /// Edges `(a, b)` with `a < b`.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for v in 0..self.n() {
            for leg in [Leg::Right, Leg::Down] {
                if let Some(w) = self.neighbor(v, leg) {
                    out.push((v, w));
                }
            }
        }
        out
    }

    pub fn transposed(&self) -> LatticeSpec {
        LatticeSpec { width: self.height, height: self.width }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn degrees_on_3x3() {
        let l = LatticeSpec::new(3, 3);
        let deg: Vec<_> = (0..9).map(|v| l.degree(v)).collect();
        assert_eq!(deg, vec![2, 3, 2, 3, 4, 3, 2, 3, 2]);
        assert_eq!(l.edges().len(), 12);
        assert_eq!(l.legs(0), vec![Leg::Right, Leg::Down]);
        assert_eq!(l.legs(8), vec![Leg::Up, Leg::Left]);
    }

    #[test]
    fn neighbors_are_symmetric() {
        let l = LatticeSpec::new(4, 3);
        for (a, b) in l.edges() {
            let there = l.legs(a).into_iter().find(|&g| l.neighbor(a, g) == Some(b)).unwrap();
            let back = l.legs(b).into_iter().find(|&g| l.neighbor(b, g) == Some(a)).unwrap();
            assert_eq!((there.slot() + 2) % 4, back.slot());
        }
    }

    #[test]
    fn single_vertex_has_no_legs() {
        let l = LatticeSpec::new(1, 1);
        assert_eq!(l.degree(0), 0);
        assert!(l.edges().is_empty());
    }
}
