//! Indoor-factory layout: base stations on a rectangular grid, UEs dropped
//! uniformly in each cell's region, attachment by strongest received power.

use std::io::Write;

use rand::Rng;
use rand_distr::{Distribution, Normal};

use crate::config::{db_to_lin, ScenarioConfig};
use crate::seed::SeedPolicy;

const PATHLOSS_TABLE: &str = include_str!("../data/pathloss.csv");

/// Coefficients of `PL = a + b log10(d) + e log10(f_GHz)` plus shadowing spread.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PathlossModel {
    pub a_db: f64,
    pub b_db: f64,
    pub e_db: f64,
    pub shadow_std_db: f64,
}

impl PathlossModel {
    /// Looks up a shipped coefficient set by label.
    pub fn lookup(label: &str) -> Option<Self> {
        PATHLOSS_TABLE
            .lines()
            .filter(|l| !l.starts_with('#') && !l.starts_with("label"))
            .find_map(|l| {
                let cols: Vec<&str> = l.split(',').map(str::trim).collect();
                if cols.len() != 5 || cols[0] != label {
                    return None;
                }
                Some(Self {
                    a_db: cols[1].parse().ok()?,
                    b_db: cols[2].parse().ok()?,
                    e_db: cols[3].parse().ok()?,
                    shadow_std_db: cols[4].parse().ok()?,
                })
            })
    }

    /// The shipped set named in the config with any per-key overrides applied.
    pub fn from_config(cfg: &ScenarioConfig) -> Self {
        let base = Self::lookup(&cfg.pathloss_model).expect("validated pathloss model");
        Self {
            a_db: cfg.pathloss_a_db.unwrap_or(base.a_db),
            b_db: cfg.pathloss_b_db.unwrap_or(base.b_db),
            e_db: cfg.pathloss_e_db.unwrap_or(base.e_db),
            shadow_std_db: cfg.shadowing_std_db.unwrap_or(base.shadow_std_db),
        }
    }

    /// Distance-dependent pathloss before shadowing. Distances below 1 m are
    /// clamped to 1 m.
    pub fn pathloss_db(&self, distance_3d_m: f64, carrier_hz: f64) -> f64 {
        let d = distance_3d_m.max(1.0);
        self.a_db + self.b_db * d.log10() + self.e_db * (carrier_hz / 1e9).log10()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Position {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Position {
    pub fn distance(&self, other: &Position) -> f64 {
        ((self.x - other.x).powi(2) + (self.y - other.y).powi(2) + (self.z - other.z).powi(2)).sqrt()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct UePlacement {
    pub position: Position,
    /// Cell whose region the UE was dropped in.
    pub region_cell: usize,
    pub serving_cell: usize,
}

/// Cells, UEs and the per-link large-scale gain.
#[derive(Debug, Clone, PartialEq)]
pub struct Topology {
    pub hall_width_m: f64,
    pub hall_depth_m: f64,
    pub grid: (usize, usize),
    pub cells: Vec<Position>,
    pub ues: Vec<UePlacement>,
    /// Linear power gain, `gain[cell * n_ues + ue]`: pathloss, shadowing, antenna gain.
    gain: Vec<f64>,
}

/// Columns x rows for `cells` sites: the most square factorisation with
/// columns >= rows (12 -> 4x3, 4 -> 2x2, prime counts become one row).
pub fn grid_shape(cells: usize) -> (usize, usize) {
    let mut rows = (cells as f64).sqrt().floor() as usize;
    while rows > 1 && !cells.is_multiple_of(rows) {
        rows -= 1;
    }
    let rows = rows.max(1);
    (cells / rows, rows)
}

impl Topology {
    pub fn num_cells(&self) -> usize {
        self.cells.len()
    }

    pub fn num_ues(&self) -> usize {
        self.ues.len()
    }

    pub fn gain(&self, cell: usize, ue: usize) -> f64 {
        self.gain[cell * self.ues.len() + ue]
    }

    pub fn serving_cell(&self, ue: usize) -> usize {
        self.ues[ue].serving_cell
    }

    pub fn ues_of(&self, cell: usize) -> impl Iterator<Item = usize> + '_ {
        self.ues
            .iter()
            .enumerate()
            .filter(move |(_, u)| u.serving_cell == cell)
            .map(|(i, _)| i)
    }

    /// Builds a topology from explicit positions and gains; attachment is by
    /// maximum gain.
    pub fn from_parts(
        hall: (f64, f64),
        cells: Vec<Position>,
        ue_positions: Vec<(Position, usize)>,
        gain: Vec<f64>,
    ) -> Self {
        let n_ues = ue_positions.len();
        assert_eq!(gain.len(), cells.len() * n_ues);
        let ues = ue_positions
            .into_iter()
            .enumerate()
            .map(|(u, (position, region_cell))| {
                let serving_cell = (0..cells.len())
                    .max_by(|&a, &b| gain[a * n_ues + u].total_cmp(&gain[b * n_ues + u]))
                    .unwrap_or(0);
                UePlacement {
                    position,
                    region_cell,
                    serving_cell,
                }
            })
            .collect();
        Self {
            hall_width_m: hall.0,
            hall_depth_m: hall.1,
            grid: grid_shape(cells.len()),
            cells,
            ues,
            gain,
        }
    }

    pub fn write_cells_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "cell_id,x,y,z")?;
        for (i, c) in self.cells.iter().enumerate() {
            writeln!(w, "{i},{},{},{}", c.x, c.y, c.z)?;
        }
        Ok(())
    }

    pub fn write_ues_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "ue_id,x,y,z,serving_cell")?;
        for (i, u) in self.ues.iter().enumerate() {
            let p = u.position;
            writeln!(w, "{i},{},{},{},{}", p.x, p.y, p.z, u.serving_cell)?;
        }
        Ok(())
    }
}

/// Places cells and UEs and computes large-scale gains.
///
/// Cells sit on a `cols x rows` grid with `inter_site_distance_m` spacing,
/// offset by `hall_margin_m` from the walls. Each cell owns the rectangle
/// halfway to its neighbours (extended to the wall for edge cells) and
/// receives exactly `ues_per_cell` uniformly dropped UEs.
pub fn drop_topology(cfg: &ScenarioConfig, seeds: &SeedPolicy) -> Topology {
    let (cols, rows) = grid_shape(cfg.num_cells);
    let d = cfg.inter_site_distance_m;
    let m = cfg.hall_margin_m;
    let width = (cols - 1) as f64 * d + 2.0 * m;
    let depth = (rows - 1) as f64 * d + 2.0 * m;

    let cells: Vec<Position> = (0..rows)
        .flat_map(|r| (0..cols).map(move |c| (c, r)))
        .map(|(c, r)| Position {
            x: m + c as f64 * d,
            y: m + r as f64 * d,
            z: cfg.bs_height_m,
        })
        .collect();

    let bounds = |i: usize, n: usize, extent: f64| -> (f64, f64) {
        let centre = m + i as f64 * d;
        let lo = if i == 0 { 0.0 } else { centre - d / 2.0 };
        let hi = if i + 1 == n { extent } else { centre + d / 2.0 };
        (lo, hi)
    };

    let mut rng = seeds.rng("topology");
    let mut ue_positions = Vec::with_capacity(cfg.total_ues());
    for (cell, _) in cells.iter().enumerate() {
        let (xlo, xhi) = bounds(cell % cols, cols, width);
        let (ylo, yhi) = bounds(cell / cols, rows, depth);
        for _ in 0..cfg.ues_per_cell {
            let x = if xhi > xlo { rng.random_range(xlo..xhi) } else { xlo };
            let y = if yhi > ylo { rng.random_range(ylo..yhi) } else { ylo };
            ue_positions.push((
                Position {
                    x,
                    y,
                    z: cfg.ue_height_m,
                },
                cell,
            ));
        }
    }

    let model = PathlossModel::from_config(cfg);
    let mut shadow_rng = seeds.rng("shadowing");
    let shadow = Normal::new(0.0, model.shadow_std_db.max(0.0)).expect("finite std");
    let mut gain = Vec::with_capacity(cells.len() * ue_positions.len());
    for cell in &cells {
        for (ue, _) in &ue_positions {
            let pl = model.pathloss_db(cell.distance(ue), cfg.carrier_freq_hz);
            let sf = if model.shadow_std_db > 0.0 {
                shadow.sample(&mut shadow_rng)
            } else {
                0.0
            };
            gain.push(db_to_lin(cfg.antenna_gain_dbi - pl - sf));
        }
    }

    Topology::from_parts((width, depth), cells, ue_positions, gain)
}
