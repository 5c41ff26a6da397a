use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::io::{self, InstanceFile};
use crate::matkit::gram_condition;
use crate::metrics::tx_power;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InspectReport {
    pub y_radar: (usize, usize),
    pub y_comm: (usize, usize),
    pub h_comm: (usize, usize),
    pub g: (usize, usize),
    pub x: (usize, usize),
    pub master_seed: Option<u64>,
    pub delta_mode: bool,
    /// `Tr(X·Xᴴ)` of the true signal, when known.
    pub tx_power: Option<f64>,
    /// `‖G_true − G₀‖_F²`, when both are known.
    pub delta_g_sq: Option<f64>,
    /// Condition number of `X·Xᴴ` for the true signal.
    pub cond_xxh: Option<f64>,
    /// Condition number of `Hᴴ·H` (infinite when `H` has fewer rows than columns).
    pub cond_hhh: f64,
}

impl InspectReport {
    pub fn of(file: &InstanceFile) -> Self {
        let inst = &file.instance;
        let gt = inst.ground_truth.as_ref();
        let nominal = file.g_nominal.as_ref().or(inst.g_nominal.as_ref());
        Self {
            y_radar: inst.y_radar.shape(),
            y_comm: inst.y_comm.shape(),
            h_comm: inst.h_comm.shape(),
            g: (inst.y_radar.rows(), inst.n_tx()),
            x: (inst.n_tx(), inst.n_symbols()),
            master_seed: file.master_seed,
            delta_mode: inst.is_delta_mode(),
            tx_power: gt.map(|g| tx_power(&g.x_true)),
            delta_g_sq: gt.zip(nominal).map(|(g, g0)| (&g.g_true - g0).frob_norm_sq()),
            cond_xxh: gt.map(|g| gram_condition(&g.x_true.hermitian())),
            cond_hhh: gram_condition(&inst.h_comm),
        }
    }
}

fn shape(s: (usize, usize)) -> String {
    format!("{}x{}", s.0, s.1)
}

fn opt(v: Option<f64>) -> String {
    v.map_or_else(|| "unknown".to_string(), |x| format!("{x:.6e}"))
}

impl fmt::Display for InspectReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "y_radar      {}", shape(self.y_radar))?;
        writeln!(f, "y_comm       {}", shape(self.y_comm))?;
        writeln!(f, "h_comm       {}", shape(self.h_comm))?;
        writeln!(f, "g            {}", shape(self.g))?;
        writeln!(f, "x            {}", shape(self.x))?;
        match self.master_seed {
            Some(s) => writeln!(f, "master_seed  {s}")?,
            None => writeln!(f, "master_seed  unknown")?,
        }
        writeln!(f, "delta_mode   {}", self.delta_mode)?;
        writeln!(f, "tx_power     {}", opt(self.tx_power))?;
        writeln!(f, "delta_g_sq   {}", opt(self.delta_g_sq))?;
        writeln!(f, "cond_xxh     {}", opt(self.cond_xxh))?;
        write!(f, "cond_hhh     {:.6e}", self.cond_hhh)
    }
}

pub fn inspect(path: &Path) -> Result<InspectReport> {
    Ok(InspectReport::of(&io::load_instance(path)?))
}
