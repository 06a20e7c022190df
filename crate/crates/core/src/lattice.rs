//! Finite symmetric site windows standing in for the infinite lattice.

use crate::error::{Error, Result};

/// Boundary handling of a [`LatticeWindow`].
///
/// Periodic windows identify the sites with the cyclic group Z_d, which is
/// what exact shift covariance and homogeneous kernels require; open windows
/// simply truncate.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Boundary {
    Open,
    Periodic,
}

impl std::fmt::Display for Boundary {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Boundary::Open => write!(f, "open"),
            Boundary::Periodic => write!(f, "periodic"),
        }
    }
}

/// Sites m in [-L, L] with dimension d = 2L + 1.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LatticeWindow {
    half_width: i64,
    boundary: Boundary,
}

impl LatticeWindow {
    pub fn new(half_width: i64, boundary: Boundary) -> Result<Self> {
        if half_width < 1 {
            return Err(Error::InvalidParameter(format!(
                "window half-width must be >= 1, got {half_width}"
            )));
        }
        Ok(Self {
            half_width,
            boundary,
        })
    }

    pub fn half_width(&self) -> i64 {
        self.half_width
    }

    pub fn boundary(&self) -> Boundary {
        self.boundary
    }

    pub fn is_periodic(&self) -> bool {
        self.boundary == Boundary::Periodic
    }

    pub fn dim(&self) -> usize {
        (2 * self.half_width + 1) as usize
    }

    pub fn sites(&self) -> impl Iterator<Item = i64> {
        -self.half_width..=self.half_width
    }

    pub fn contains(&self, site: i64) -> bool {
        site.abs() <= self.half_width
    }

    /// Index of a site in the basis ordering (-L maps to 0).
    pub fn index_of(&self, site: i64) -> Result<usize> {
        if !self.contains(site) {
            return Err(Error::SiteOutsideWindow {
                site,
                half_width: self.half_width,
            });
        }
        Ok((site + self.half_width) as usize)
    }

    /// Site at a basis index. Panics on an out-of-range index.
    pub fn site_at(&self, index: usize) -> i64 {
        assert!(index < self.dim(), "index {index} out of range");
        index as i64 - self.half_width
    }

    /// Reduce an arbitrary integer to its representative in [-L, L].
    ///
    /// Only meaningful on periodic windows; d = 2L + 1 is odd so the
    /// representative is unique.
    pub fn wrap(&self, site: i64) -> i64 {
        let d = self.dim() as i64;
        let r = (site + self.half_width).rem_euclid(d);
        r - self.half_width
    }

    /// Signed displacement `to - from`; on periodic windows the cyclic
    /// representative in [-L, L].
    pub fn displacement(&self, from: i64, to: i64) -> i64 {
        match self.boundary {
            Boundary::Open => to - from,
            Boundary::Periodic => self.wrap(to - from),
        }
    }

    /// Site shifted by `a`. Wraps on periodic windows, errors when the
    /// result falls outside an open window.
    pub fn shifted_site(&self, site: i64, a: i64) -> Result<i64> {
        let raw = site + a;
        match self.boundary {
            Boundary::Periodic => Ok(self.wrap(raw)),
            Boundary::Open => {
                if self.contains(raw) {
                    Ok(raw)
                } else {
                    Err(Error::SiteOutsideWindow {
                        site: raw,
                        half_width: self.half_width,
                    })
                }
            }
        }
    }
}

/// Smallest half-width for which Gaussian tails of width `scale` centered at
/// `center` fall below ~1e-14 inside the window: L = ceil(6*scale) + |center| + 2.
pub fn suggested_half_width(scale: f64, center: i64) -> i64 {
    let base = (6.0 * scale.max(0.0)).ceil() as i64;
    (base + center.abs() + 2).max(1)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn site_index_bijection() {
        let w = LatticeWindow::new(10, Boundary::Open).unwrap();
        assert_eq!(w.dim(), 21);
        for (i, m) in w.sites().enumerate() {
            assert_eq!(w.index_of(m).unwrap(), i);
            assert_eq!(w.site_at(i), m);
        }
        assert!(w.index_of(11).is_err());
        assert!(w.index_of(-11).is_err());
    }

    #[test]
    fn rejects_degenerate_window() {
        assert!(LatticeWindow::new(0, Boundary::Open).is_err());
        assert!(LatticeWindow::new(-3, Boundary::Periodic).is_err());
    }

    #[test]
    fn cyclic_displacement_is_signed_representative() {
        let w = LatticeWindow::new(3, Boundary::Periodic).unwrap(); // d = 7
        assert_eq!(w.displacement(3, -3), 1); // -6 wraps to +1
        assert_eq!(w.displacement(-3, 3), -1);
        assert_eq!(w.displacement(0, 2), 2);
        for from in w.sites() {
            for to in w.sites() {
                let u = w.displacement(from, to);
                assert!(u.abs() <= 3);
                assert_eq!(w.wrap(from + u), to);
            }
        }
    }

    #[test]
    fn open_shift_errors_outside() {
        let w = LatticeWindow::new(2, Boundary::Open).unwrap();
        assert_eq!(w.shifted_site(1, 1).unwrap(), 2);
        assert!(w.shifted_site(2, 1).is_err());
        let p = LatticeWindow::new(2, Boundary::Periodic).unwrap();
        assert_eq!(p.shifted_site(2, 1).unwrap(), -2);
    }

    #[test]
    fn half_width_rule() {
        assert_eq!(suggested_half_width(1.0, 0), 8);
        assert_eq!(suggested_half_width(2.0, -3), 17);
        assert_eq!(suggested_half_width(0.0, 0), 2);
    }
}
