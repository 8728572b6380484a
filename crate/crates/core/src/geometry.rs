//! Combinatorial incidence geometries.

use std::collections::{BTreeSet, HashMap, HashSet};

use crate::error::{Error, Result};

/// Points, lines and point-on-line incidences. Identifiers map to dense
/// indices in declaration order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IncidenceGeometry {
    points: Vec<String>,
    lines: Vec<String>,
    incidences: Vec<(usize, usize)>,
    point_index: HashMap<String, usize>,
    line_index: HashMap<String, usize>,
}

/// `(p_r, l_k)` counts. `r` and `k` are `None` when degrees vary.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConfigurationSignature {
    pub p: usize,
    pub l: usize,
    pub r: Option<usize>,
    pub k: Option<usize>,
    pub balanced: bool,
}

impl std::fmt::Display for ConfigurationSignature {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let deg = |d: Option<usize>| d.map_or("*".to_string(), |d| d.to_string());
        if self.balanced {
            write!(f, "{}_{}", self.p, deg(self.r))
        } else {
            write!(f, "({}_{}, {}_{})", self.p, deg(self.r), self.l, deg(self.k))
        }
    }
}

/// Result of the exhaustive subset count over incidence subsets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubsetCount {
    pub checked: u64,
    pub violations: u64,
    /// Smallest violating subset found first in enumeration order.
    pub first_violation: Option<Vec<usize>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparsityCounts {
    pub excess: i64,
    pub minimally_counted: bool,
    /// `None` when |I| exceeds the cap.
    pub subsets: Option<SubsetCount>,
}

pub const DEFAULT_SUBSET_CAP: usize = 20;

impl IncidenceGeometry {
    pub fn new<P, L, S>(points: P, lines: L, incidences: &[(S, S)]) -> Result<Self>
    where
        P: IntoIterator,
        P::Item: Into<String>,
        L: IntoIterator,
        L::Item: Into<String>,
        S: AsRef<str>,
    {
        let points: Vec<String> = points.into_iter().map(Into::into).collect();
        let lines: Vec<String> = lines.into_iter().map(Into::into).collect();
        let mut point_index = HashMap::new();
        for (i, id) in points.iter().enumerate() {
            if point_index.insert(id.clone(), i).is_some() {
                return Err(Error::DuplicateId(id.clone()));
            }
        }
        let mut line_index = HashMap::new();
        for (i, id) in lines.iter().enumerate() {
            if line_index.insert(id.clone(), i).is_some() {
                return Err(Error::DuplicateId(id.clone()));
            }
        }
        let mut seen = HashSet::new();
        let mut inc = Vec::with_capacity(incidences.len());
        for (p, l) in incidences {
            let (p, l) = (p.as_ref(), l.as_ref());
            let pi = *point_index
                .get(p)
                .ok_or_else(|| Error::UnknownPoint(p.to_string()))?;
            let li = *line_index
                .get(l)
                .ok_or_else(|| Error::UnknownLine(l.to_string()))?;
            if !seen.insert((pi, li)) {
                return Err(Error::DuplicateIncidence(p.to_string(), l.to_string()));
            }
            inc.push((pi, li));
        }
        Ok(IncidenceGeometry {
            points,
            lines,
            incidences: inc,
            point_index,
            line_index,
        })
    }

    pub fn points(&self) -> &[String] {
        &self.points
    }

    pub fn lines(&self) -> &[String] {
        &self.lines
    }

    /// `(point index, line index)` pairs in declaration order.
    pub fn incidences(&self) -> &[(usize, usize)] {
        &self.incidences
    }

    pub fn num_points(&self) -> usize {
        self.points.len()
    }

    pub fn num_lines(&self) -> usize {
        self.lines.len()
    }

    pub fn num_incidences(&self) -> usize {
        self.incidences.len()
    }

    pub fn point_index(&self, id: &str) -> Result<usize> {
        self.point_index
            .get(id)
            .copied()
            .ok_or_else(|| Error::UnknownPoint(id.to_string()))
    }

    pub fn line_index(&self, id: &str) -> Result<usize> {
        self.line_index
            .get(id)
            .copied()
            .ok_or_else(|| Error::UnknownLine(id.to_string()))
    }

    pub fn incidence_index(&self, point: usize, line: usize) -> Option<usize> {
        self.incidences.iter().position(|&x| x == (point, line))
    }

    pub fn is_incident(&self, point: usize, line: usize) -> bool {
        self.incidence_index(point, line).is_some()
    }

    pub fn incidence_label(&self, k: usize) -> (String, String) {
        let (p, l) = self.incidences[k];
        (self.points[p].clone(), self.lines[l].clone())
    }

    /// Lines through each point, in incidence order.
    pub fn lines_through(&self, point: usize) -> Vec<usize> {
        self.incidences
            .iter()
            .filter(|&&(p, _)| p == point)
            .map(|&(_, l)| l)
            .collect()
    }

    /// Points on each line, in incidence order.
    pub fn points_on(&self, line: usize) -> Vec<usize> {
        self.incidences
            .iter()
            .filter(|&&(_, l)| l == line)
            .map(|&(p, _)| p)
            .collect()
    }

    pub fn signature(&self) -> ConfigurationSignature {
        let mut pdeg = vec![0usize; self.points.len()];
        let mut ldeg = vec![0usize; self.lines.len()];
        for &(p, l) in &self.incidences {
            pdeg[p] += 1;
            ldeg[l] += 1;
        }
        let constant = |d: &[usize]| match d.split_first() {
            Some((first, rest)) if rest.iter().all(|x| x == first) => Some(*first),
            _ => None,
        };
        let r = constant(&pdeg);
        let k = constant(&ldeg);
        ConfigurationSignature {
            p: self.points.len(),
            l: self.lines.len(),
            r,
            k,
            balanced: r.is_some() && r == k,
        }
    }

    /// Two lines share at most one point and two points lie on at most
    /// one common line.
    pub fn is_linear_space_like(&self) -> bool {
        self.linear_space_violation().is_none()
    }

    /// First pair of lines (or points) sharing two or more elements.
    pub fn linear_space_violation(&self) -> Option<(String, String)> {
        let on: Vec<BTreeSet<usize>> = (0..self.lines.len())
            .map(|l| self.points_on(l).into_iter().collect())
            .collect();
        for a in 0..on.len() {
            for b in a + 1..on.len() {
                if on[a].intersection(&on[b]).count() > 1 {
                    return Some((self.lines[a].clone(), self.lines[b].clone()));
                }
            }
        }
        // Two points on two common lines is the same event as two lines
        // through two common points, so the line scan suffices.
        None
    }

    /// Sorted index triples of distinct points sharing a line: the
    /// non-bases of the derived rank-3 matroid.
    pub fn matroid_nonbases(&self) -> BTreeSet<[usize; 3]> {
        let mut out = BTreeSet::new();
        for l in 0..self.lines.len() {
            let mut pts = self.points_on(l);
            pts.sort_unstable();
            pts.dedup();
            for i in 0..pts.len() {
                for j in i + 1..pts.len() {
                    for k in j + 1..pts.len() {
                        out.insert([pts[i], pts[j], pts[k]]);
                    }
                }
            }
        }
        out
    }

    /// `true` if the three points, in any order, form a non-basis.
    pub fn is_nonbasis(&self, a: usize, b: usize, c: usize) -> bool {
        let mut t = [a, b, c];
        t.sort_unstable();
        if t[0] == t[1] || t[1] == t[2] {
            return false;
        }
        (0..self.lines.len()).any(|l| {
            let pts = self.points_on(l);
            t.iter().all(|p| pts.contains(p))
        })
    }

    pub fn sparsity_counts(&self) -> SparsityCounts {
        self.sparsity_counts_capped(DEFAULT_SUBSET_CAP)
    }

    /// `excess = |I| - (2|P| + 2|L| - 8)`; the subset inequality
    /// `|I'| <= 2|L(I')| + 2|P(I')| - 8` is checked over every nonempty
    /// subset when `|I| <= cap`.
    pub fn sparsity_counts_capped(&self, cap: usize) -> SparsityCounts {
        let excess = self.incidences.len() as i64
            - (2 * self.points.len() as i64 + 2 * self.lines.len() as i64 - 8);
        let subsets = (self.incidences.len() <= cap).then(|| self.subset_count());
        SparsityCounts {
            excess,
            minimally_counted: excess == 0,
            subsets,
        }
    }

    fn subset_count(&self) -> SubsetCount {
        let n = self.incidences.len();
        let mut checked = 0u64;
        let mut violations = 0u64;
        let mut first: Option<Vec<usize>> = None;
        let mut pmask = vec![0u32; self.points.len()];
        let mut lmask = vec![0u32; self.lines.len()];
        for mask in 1u64..(1u64 << n) {
            checked += 1;
            pmask.iter_mut().for_each(|x| *x = 0);
            lmask.iter_mut().for_each(|x| *x = 0);
            let mut size = 0i64;
            for (k, &(p, l)) in self.incidences.iter().enumerate() {
                if mask >> k & 1 == 1 {
                    size += 1;
                    pmask[p] = 1;
                    lmask[l] = 1;
                }
            }
            let np: i64 = pmask.iter().map(|&x| x as i64).sum();
            let nl: i64 = lmask.iter().map(|&x| x as i64).sum();
            if size > 2 * np + 2 * nl - 8 {
                violations += 1;
                let subset: Vec<usize> = (0..n).filter(|k| mask >> k & 1 == 1).collect();
                let better = first.as_ref().is_none_or(|f| subset.len() < f.len());
                if better {
                    first = Some(subset);
                }
            }
        }
        SubsetCount {
            checked,
            violations,
            first_violation: first,
        }
    }
}
