//! Small packaged spaces with known cohomology.

use crate::metric::FiniteMetricSpace;
use crate::vr::{Convention, FilteredComplex, SimplicialComplex};

pub const CIRCLE: &str = include_str!("../fixtures/circle.complex");
pub const SPHERE: &str = include_str!("../fixtures/sphere.complex");
pub const WEDGE_OF_CIRCLES: &str = include_str!("../fixtures/wedge_circles.complex");
pub const CIRCLE_WEDGE_SPHERE: &str = include_str!("../fixtures/circle_wedge_sphere.complex");
pub const RP2: &str = include_str!("../fixtures/rp2.complex");
pub const HEXAGON_CSV: &str = include_str!("../fixtures/hexagon.csv");
pub const POINT_CSV: &str = include_str!("../fixtures/point.csv");

/// A packaged complex with its display name and mod-2 Betti numbers.
pub struct Fixture {
    pub name: &'static str,
    pub text: &'static str,
    pub betti_mod2: &'static [usize],
    pub betti_mod3: &'static [usize],
}

pub const ALL: [Fixture; 5] = [
    Fixture { name: "S1", text: CIRCLE, betti_mod2: &[1, 1], betti_mod3: &[1, 1] },
    Fixture { name: "S2", text: SPHERE, betti_mod2: &[1, 0, 1], betti_mod3: &[1, 0, 1] },
    Fixture { name: "S1vS1", text: WEDGE_OF_CIRCLES, betti_mod2: &[1, 2], betti_mod3: &[1, 2] },
    Fixture { name: "S1vS2", text: CIRCLE_WEDGE_SPHERE, betti_mod2: &[1, 1, 1], betti_mod3: &[1, 1, 1] },
    Fixture { name: "RP2", text: RP2, betti_mod2: &[1, 1, 1], betti_mod3: &[1, 0, 0] },
];

impl Fixture {
    pub fn complex(&self) -> SimplicialComplex {
        parse(self.text)
    }

    /// Constant filtration: the whole complex at scale 0.
    pub fn filtration(&self) -> FilteredComplex {
        FilteredComplex::from_complex_str(self.text, Convention::Open).expect("packaged fixture parses")
    }
}

fn parse(text: &str) -> SimplicialComplex {
    FilteredComplex::from_complex_str(text, Convention::Open)
        .expect("packaged fixture parses")
        .full_complex()
}

pub fn circle() -> SimplicialComplex {
    parse(CIRCLE)
}

/// Boundary of the octahedron.
pub fn octahedron() -> SimplicialComplex {
    parse(SPHERE)
}

pub fn wedge_of_circles() -> SimplicialComplex {
    parse(WEDGE_OF_CIRCLES)
}

pub fn circle_wedge_sphere() -> SimplicialComplex {
    parse(CIRCLE_WEDGE_SPHERE)
}

/// The six-vertex triangulation of the real projective plane.
pub fn rp2() -> SimplicialComplex {
    parse(RP2)
}

/// Six equally spaced points on a circle of circumference `2π`.
pub fn hexagon() -> FiniteMetricSpace {
    FiniteMetricSpace::from_csv_str(HEXAGON_CSV).expect("packaged fixture parses")
}

pub fn point() -> FiniteMetricSpace {
    FiniteMetricSpace::from_csv_str(POINT_CSV).expect("packaged fixture parses")
}
