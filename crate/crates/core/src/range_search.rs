//! Ellipse range counting over static point sets.
//!
//! Two interchangeable backends answer the same queries with identical
//! results: a plain scan, and a uniform grid that prunes with the ellipse's
//! bounding box and accepts whole cells whose point hull lies inside.

use std::time::{Duration, Instant};

use serde::Serialize;

use crate::geometry::{Aabb, FocalEllipse, Point};
use crate::{EPS_ABS, EPS_REL};

/// Relative margin for accepting a whole cell from its corners. Points inside
/// the corners' hull then pass the per-point predicate despite rounding.
const CELL_ACCEPT_MARGIN: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Backend {
    NaiveScan,
    GridIndex,
}

impl Backend {
    pub const ALL: [Backend; 2] = [Backend::NaiveScan, Backend::GridIndex];

    pub fn name(self) -> &'static str {
        match self {
            Backend::NaiveScan => "naive",
            Backend::GridIndex => "grid",
        }
    }
}

impl std::str::FromStr for Backend {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "naive" | "naivescan" | "naive-scan" => Ok(Backend::NaiveScan),
            "grid" | "gridindex" | "grid-index" => Ok(Backend::GridIndex),
            other => Err(format!(
                "unknown backend `{other}` (expected naive or grid)"
            )),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BuildStats {
    pub count: usize,
    pub build_time: Duration,
    pub memory_bytes: usize,
}

#[derive(Debug, Clone)]
struct Grid {
    origin: Point,
    cell: f64,
    cols: usize,
    rows: usize,
    /// CSR layout: points of cell `c` are `members[start[c]..start[c + 1]]`,
    /// in increasing original index.
    start: Vec<u32>,
    members: Vec<u32>,
    /// Tight bounding box of each cell's points (meaningless for empty cells).
    cell_boxes: Vec<Aabb>,
    occupied: Vec<u32>,
    bbox: Aabb,
}

#[derive(Debug, Clone)]
enum Index {
    Naive,
    Grid(Grid),
}

/// Immutable range-counting index over a point list; indices reported by
/// queries are 1-based positions in that list.
#[derive(Debug, Clone)]
pub struct RangeCounter {
    points: Vec<Point>,
    backend: Backend,
    index: Index,
    stats: BuildStats,
}

impl Grid {
    fn build(points: &[Point]) -> Option<Grid> {
        let bbox = Aabb::of_points(points)?;
        let m = points.len();
        let side = (m as f64).sqrt().ceil().max(1.0);
        let width = bbox.max.x - bbox.min.x;
        let height = bbox.max.y - bbox.min.y;
        let scale = 1.0_f64
            .max(bbox.min.x.abs())
            .max(bbox.max.x.abs())
            .max(bbox.min.y.abs())
            .max(bbox.max.y.abs());
        let cell = (width.max(height) / side).max(EPS_ABS * scale);
        let cols = ((width / cell).floor() as usize + 1).min(side as usize + 1);
        let rows = ((height / cell).floor() as usize + 1).min(side as usize + 1);
        let mut grid = Grid {
            origin: bbox.min,
            cell,
            cols,
            rows,
            start: vec![0; cols * rows + 1],
            members: vec![0; m],
            cell_boxes: Vec::new(),
            occupied: Vec::new(),
            bbox,
        };
        let ids: Vec<usize> = points.iter().map(|p| grid.cell_of(*p)).collect();
        for &c in &ids {
            grid.start[c + 1] += 1;
        }
        for c in 0..cols * rows {
            grid.start[c + 1] += grid.start[c];
        }
        let mut fill = grid.start.clone();
        for (i, &c) in ids.iter().enumerate() {
            grid.members[fill[c] as usize] = i as u32;
            fill[c] += 1;
        }
        grid.cell_boxes = (0..cols * rows)
            .map(|c| {
                let pts: Vec<Point> = grid
                    .cell_members(c)
                    .iter()
                    .map(|&i| points[i as usize])
                    .collect();
                Aabb::of_points(&pts).unwrap_or(bbox)
            })
            .collect();
        grid.occupied = (0..cols * rows)
            .filter(|&c| grid.start[c + 1] > grid.start[c])
            .map(|c| c as u32)
            .collect();
        Some(grid)
    }

    fn col_of(&self, x: f64) -> usize {
        (((x - self.origin.x) / self.cell).floor().max(0.0) as usize).min(self.cols - 1)
    }

    fn row_of(&self, y: f64) -> usize {
        (((y - self.origin.y) / self.cell).floor().max(0.0) as usize).min(self.rows - 1)
    }

    fn cell_of(&self, p: Point) -> usize {
        self.row_of(p.y) * self.cols + self.col_of(p.x)
    }

    fn cell_members(&self, c: usize) -> &[u32] {
        &self.members[self.start[c] as usize..self.start[c + 1] as usize]
    }

    fn memory_bytes(&self) -> usize {
        (self.start.len() + self.members.len() + self.occupied.len()) * 4
            + self.cell_boxes.len() * std::mem::size_of::<Aabb>()
    }
}

fn box_inside(e: &FocalEllipse, b: &Aabb) -> bool {
    b.corners()
        .iter()
        .all(|&q| e.contains_with_margin(q, EPS_REL, CELL_ACCEPT_MARGIN))
}

impl RangeCounter {
    pub fn build(points: Vec<Point>, backend: Backend) -> RangeCounter {
        let started = Instant::now();
        let index = match backend {
            Backend::NaiveScan => Index::Naive,
            Backend::GridIndex => Grid::build(&points).map_or(Index::Naive, Index::Grid),
        };
        let memory_bytes = points.len() * std::mem::size_of::<Point>()
            + match &index {
                Index::Naive => 0,
                Index::Grid(g) => g.memory_bytes(),
            };
        let stats = BuildStats {
            count: points.len(),
            build_time: started.elapsed(),
            memory_bytes,
        };
        RangeCounter {
            points,
            backend,
            index,
            stats,
        }
    }

    pub fn from_slice(points: &[Point], backend: Backend) -> RangeCounter {
        Self::build(points.to_vec(), backend)
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn stats(&self) -> &BuildStats {
        &self.stats
    }

    pub fn backend(&self) -> Backend {
        self.backend
    }

    fn inside(&self, e: &FocalEllipse, i: usize) -> bool {
        e.contains(self.points[i], EPS_REL)
    }

    /// Number of points inside the closed ellipse.
    pub fn count_in_ellipse(&self, e: &FocalEllipse) -> usize {
        let grid = match &self.index {
            Index::Naive => {
                return (0..self.points.len())
                    .filter(|&i| self.inside(e, i))
                    .count()
            }
            Index::Grid(g) => g,
        };
        let eb = e.bounding_box(EPS_REL);
        if !eb.intersects(&grid.bbox) {
            return 0;
        }
        if eb.contains_box(&grid.bbox) && box_inside(e, &grid.bbox) {
            return self.points.len();
        }
        let (c0, c1) = (grid.col_of(eb.min.x), grid.col_of(eb.max.x));
        let (r0, r1) = (grid.row_of(eb.min.y), grid.row_of(eb.max.y));
        let mut count = 0;
        for r in r0..=r1 {
            for c in c0..=c1 {
                let id = r * grid.cols + c;
                let members = grid.cell_members(id);
                if members.is_empty() {
                    continue;
                }
                let cb = &grid.cell_boxes[id];
                if !eb.intersects(cb) {
                    continue;
                }
                if box_inside(e, cb) {
                    count += members.len();
                } else {
                    count += members
                        .iter()
                        .filter(|&&i| self.inside(e, i as usize))
                        .count();
                }
            }
        }
        count
    }

    /// `Ok(())` when every point is inside, otherwise the smallest 1-based
    /// index of a point outside.
    pub fn all_in_ellipse(&self, e: &FocalEllipse) -> Result<(), usize> {
        let grid = match &self.index {
            Index::Naive => {
                return match (0..self.points.len()).find(|&i| !self.inside(e, i)) {
                    Some(i) => Err(i + 1),
                    None => Ok(()),
                }
            }
            Index::Grid(g) => g,
        };
        let eb = e.bounding_box(EPS_REL);
        if eb.contains_box(&grid.bbox) && box_inside(e, &grid.bbox) {
            return Ok(());
        }
        let mut first_out: Option<u32> = None;
        for &id in &grid.occupied {
            let id = id as usize;
            let members = grid.cell_members(id);
            if first_out.is_some_and(|f| members[0] > f) {
                continue;
            }
            let cb = &grid.cell_boxes[id];
            let candidate = if !eb.intersects(cb) {
                Some(members[0])
            } else if eb.contains_box(cb) && box_inside(e, cb) {
                None
            } else {
                members
                    .iter()
                    .copied()
                    .take_while(|&i| first_out.is_none_or(|f| i < f))
                    .find(|&i| !self.inside(e, i as usize))
            };
            if let Some(i) = candidate {
                first_out = Some(first_out.map_or(i, |f| f.min(i)));
            }
        }
        match first_out {
            Some(i) => Err(i as usize + 1),
            None => Ok(()),
        }
    }
}
