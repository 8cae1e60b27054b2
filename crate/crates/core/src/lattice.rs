//! Cubic lattices with open boundaries, site regions and the manhattan metric.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Metric {
    #[default]
    Manhattan,
}

/// A `dims`-dimensional box of sites indexed in row-major order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Lattice {
    extents: Vec<usize>,
    #[serde(default)]
    metric: Metric,
}

impl Lattice {
    pub fn new(extents: &[usize]) -> Result<Self> {
        if extents.is_empty() || extents.len() > 3 {
            return Err(Error::ShapeMismatch(format!(
                "lattice must have 1 to 3 dimensions, got {}",
                extents.len()
            )));
        }
        if extents.contains(&0) {
            return Err(Error::ShapeMismatch("lattice extents must be positive".into()));
        }
        Ok(Lattice {
            extents: extents.to_vec(),
            metric: Metric::Manhattan,
        })
    }

    pub fn chain(n: usize) -> Self {
        Lattice::new(&[n]).expect("chain length must be positive")
    }

    pub fn dims(&self) -> usize {
        self.extents.len()
    }

    pub fn extents(&self) -> &[usize] {
        &self.extents
    }

    pub fn metric(&self) -> Metric {
        self.metric
    }

    pub fn sites(&self) -> usize {
        self.extents.iter().product()
    }

    pub fn coords(&self, site: usize) -> Vec<usize> {
        let mut c = vec![0; self.extents.len()];
        let mut rem = site;
        for (k, &e) in self.extents.iter().enumerate().rev() {
            c[k] = rem % e;
            rem /= e;
        }
        c
    }

    pub fn index(&self, coords: &[usize]) -> Result<usize> {
        if coords.len() != self.extents.len() {
            return Err(Error::DimensionMismatch {
                expected: self.extents.len(),
                found: coords.len(),
            });
        }
        let mut idx = 0;
        for (&c, &e) in coords.iter().zip(&self.extents) {
            if c >= e {
                return Err(Error::SiteOutOfRange {
                    site: c,
                    sites: e,
                });
            }
            idx = idx * e + c;
        }
        Ok(idx)
    }

    pub fn distance(&self, x: usize, y: usize) -> usize {
        match self.metric {
            Metric::Manhattan => self
                .coords(x)
                .iter()
                .zip(self.coords(y))
                .map(|(&a, b)| a.abs_diff(b))
                .sum(),
        }
    }

    pub fn diameter(&self) -> usize {
        self.extents.iter().map(|e| e - 1).sum()
    }

    /// Nearest neighbours of a site (open boundaries).
    pub fn neighbors(&self, site: usize) -> Vec<usize> {
        let c = self.coords(site);
        let mut out = Vec::new();
        for k in 0..c.len() {
            if c[k] > 0 {
                let mut d = c.clone();
                d[k] -= 1;
                out.push(self.index(&d).unwrap());
            }
            if c[k] + 1 < self.extents[k] {
                let mut d = c.clone();
                d[k] += 1;
                out.push(self.index(&d).unwrap());
            }
        }
        out.sort_unstable();
        out
    }

    /// All nearest-neighbour bonds (x, y) with x < y.
    pub fn bonds(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for x in 0..self.sites() {
            for y in self.neighbors(x) {
                if x < y {
                    out.push((x, y));
                }
            }
        }
        out
    }

    pub fn full(&self) -> Region {
        Region {
            lattice: self.clone(),
            sites: (0..self.sites()).collect(),
        }
    }
}

/// A sorted, duplicate-free set of sites on a lattice.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Region {
    lattice: Lattice,
    sites: Vec<usize>,
}

impl Region {
    pub fn new(lattice: &Lattice, sites: impl IntoIterator<Item = usize>) -> Result<Self> {
        let set: BTreeSet<usize> = sites.into_iter().collect();
        let n = lattice.sites();
        if let Some(&bad) = set.iter().find(|&&s| s >= n) {
            return Err(Error::SiteOutOfRange { site: bad, sites: n });
        }
        Ok(Region {
            lattice: lattice.clone(),
            sites: set.into_iter().collect(),
        })
    }

    pub fn lattice(&self) -> &Lattice {
        &self.lattice
    }

    pub fn sites(&self) -> &[usize] {
        &self.sites
    }

    pub fn len(&self) -> usize {
        self.sites.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sites.is_empty()
    }

    pub fn contains(&self, site: usize) -> bool {
        self.sites.binary_search(&site).is_ok()
    }

    pub fn is_subset(&self, other: &Region) -> bool {
        self.sites.iter().all(|&s| other.contains(s))
    }

    pub fn intersects(&self, other: &Region) -> bool {
        self.sites.iter().any(|&s| other.contains(s))
    }

    pub fn complement(&self) -> Region {
        Region {
            lattice: self.lattice.clone(),
            sites: (0..self.lattice.sites()).filter(|&s| !self.contains(s)).collect(),
        }
    }

    pub fn union(&self, other: &Region) -> Result<Region> {
        self.same_lattice(other)?;
        Region::new(&self.lattice, self.sites.iter().chain(&other.sites).copied())
    }

    pub fn intersection(&self, other: &Region) -> Result<Region> {
        self.same_lattice(other)?;
        Ok(Region {
            lattice: self.lattice.clone(),
            sites: self.sites.iter().copied().filter(|&s| other.contains(s)).collect(),
        })
    }

    /// Distance from a site to the nearest site of the region.
    pub fn distance_to(&self, site: usize) -> Option<usize> {
        self.sites.iter().map(|&s| self.lattice.distance(s, site)).min()
    }

    pub fn diameter(&self) -> usize {
        let mut d = 0;
        for (i, &x) in self.sites.iter().enumerate() {
            for &y in &self.sites[i + 1..] {
                d = d.max(self.lattice.distance(x, y));
            }
        }
        d
    }

    /// Number of nearest-neighbour bonds joining the region to its complement.
    pub fn boundary_size(&self) -> usize {
        self.lattice
            .bonds()
            .into_iter()
            .filter(|&(x, y)| self.contains(x) != self.contains(y))
            .count()
    }

    fn same_lattice(&self, other: &Region) -> Result<()> {
        if self.lattice != other.lattice {
            return Err(Error::LatticeMismatch);
        }
        Ok(())
    }
}

pub fn region_distance(a: &Region, b: &Region) -> Result<usize> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::EmptyRegion);
    }
    a.same_lattice(b)?;
    Ok(a
        .sites
        .iter()
        .flat_map(|&x| b.sites.iter().map(move |&y| (x, y)))
        .map(|(x, y)| a.lattice.distance(x, y))
        .min()
        .unwrap())
}

/// Sites whose distances to `a` and `b` differ by at most one.
pub fn boundary_band(a: &Region, b: &Region) -> Result<Region> {
    let dist = region_distance(a, b)?;
    if dist < 2 {
        return Err(Error::RegionsTooClose {
            distance: dist,
            required: 2,
        });
    }
    let lat = &a.lattice;
    Region::new(
        lat,
        (0..lat.sites()).filter(|&x| {
            let da = a.distance_to(x).unwrap();
            let db = b.distance_to(x).unwrap();
            da.abs_diff(db) <= 1
        }),
    )
}

/// Indices of the multi-site terms that touch the band halfway between `a`
/// and `b`. Single-site terms never couple the two sides and are kept.
pub fn separating_boundary(a: &Region, b: &Region, terms: &[Region]) -> Result<Vec<usize>> {
    if a.intersects(b) {
        return Err(Error::OverlappingRegions);
    }
    let band = boundary_band(a, b)?;
    Ok(terms
        .iter()
        .enumerate()
        .filter(|(_, t)| t.len() >= 2 && t.intersects(&band))
        .map(|(i, _)| i)
        .collect())
}

/// Sites outside `a` within distance `l` of it.
pub fn buffer_region(a: &Region, l: usize) -> Region {
    let lat = &a.lattice;
    let sites: Vec<usize> = if a.is_empty() {
        Vec::new()
    } else {
        (0..lat.sites())
            .filter(|&x| !a.contains(x) && a.distance_to(x).unwrap() <= l)
            .collect()
    };
    Region {
        lattice: lat.clone(),
        sites,
    }
}
