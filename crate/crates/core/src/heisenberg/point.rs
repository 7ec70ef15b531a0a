use serde::{Deserialize, Serialize};

/// A point of the Heisenberg group in Cartesian coordinates; cylindrical
/// coordinates are derived on demand.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Point {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Point {
    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Point { x, y, z }
    }

    pub fn from_cylindrical(r: f64, phi: f64, z: f64) -> Self {
        Point::new(r * phi.cos(), r * phi.sin(), z)
    }

    pub fn r(&self) -> f64 {
        self.x.hypot(self.y)
    }

    /// Principal angle in (-pi, pi].
    pub fn phi(&self) -> f64 {
        self.y.atan2(self.x)
    }

    pub fn cylindrical(&self) -> (f64, f64, f64) {
        (self.r(), self.phi(), self.z)
    }

    pub fn to_array(&self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }

    /// Parabolic dilation `(x, y, z) -> (lx, ly, l^2 z)`.
    pub fn dilate(&self, l: f64) -> Point {
        Point::new(l * self.x, l * self.y, l * l * self.z)
    }

    pub fn is_origin(&self) -> bool {
        self.x == 0.0 && self.y == 0.0 && self.z == 0.0
    }

    /// Same angle and height, radius scaled by `s`.
    pub fn scale_radius(&self, s: f64) -> Point {
        Point::new(s * self.x, s * self.y, self.z)
    }
}

impl From<[f64; 3]> for Point {
    fn from(a: [f64; 3]) -> Self {
        Point::new(a[0], a[1], a[2])
    }
}
