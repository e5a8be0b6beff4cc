//! JSON file format for loop programs.
//!
//! ```json
//! {
//!   "version": 1,
//!   "num_qubits": 2,
//!   "steps": [
//!     { "kind": "single_qubit_plane_loop", "qubit": 0, "plane": "theta1-theta2-phi0", "area": 0.5 },
//!     { "kind": "controlled_phase", "control": 0, "target": 1, "rect": { "a": 1.5707963267948966, "b": 3.141592653589793 } }
//!   ]
//! }
//! ```
//!
//! A step carries either a signed `area` or a rectangle `rect` whose
//! projected area is used. Unknown fields are rejected.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gates::{LoopProgram, LoopStep};
use crate::holonomy::{projected_area, rectangle_loop, PlaneKind, PlaneSpec};

pub const CURRENT_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StepKind {
    SingleQubitPlaneLoop,
    ControlledPhase,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RectExtents {
    pub a: f64,
    pub b: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StepRecord {
    pub kind: StepKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub qubit: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub control: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub plane: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub area: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rect: Option<RectExtents>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LoopProgramFile {
    pub version: u32,
    pub num_qubits: usize,
    pub steps: Vec<StepRecord>,
}

impl LoopProgramFile {
    pub fn from_json(text: &str) -> Result<Self> {
        let file: Self = serde_json::from_str(text).map_err(|e| Error::invalid(format!("program file: {e}")))?;
        if file.version != CURRENT_VERSION {
            return Err(Error::invalid(format!(
                "unsupported program file version {} (expected {CURRENT_VERSION})",
                file.version
            )));
        }
        Ok(file)
    }

    pub fn to_json_pretty(&self) -> String {
        serde_json::to_string_pretty(self).expect("program file serializes")
    }

    pub fn from_program(prog: &LoopProgram<f64>) -> Self {
        let steps = prog
            .steps
            .iter()
            .map(|s| match *s {
                LoopStep::PlaneLoop { qubit, plane, area } => StepRecord {
                    kind: StepKind::SingleQubitPlaneLoop,
                    qubit: Some(qubit),
                    control: None,
                    target: None,
                    plane: Some(plane.name().to_string()),
                    area: Some(area),
                    rect: None,
                },
                LoopStep::ControlledPhase { control, target, area } => StepRecord {
                    kind: StepKind::ControlledPhase,
                    qubit: None,
                    control: Some(control),
                    target: Some(target),
                    plane: Some(PlaneKind::Grassmann.name().to_string()),
                    area: Some(area),
                    rect: None,
                },
            })
            .collect();
        Self { version: CURRENT_VERSION, num_qubits: prog.num_qubits, steps }
    }

    pub fn to_program(&self) -> Result<LoopProgram<f64>> {
        if self.version != CURRENT_VERSION {
            return Err(Error::invalid(format!("unsupported program file version {}", self.version)));
        }
        let steps = self
            .steps
            .iter()
            .enumerate()
            .map(|(i, s)| s.to_step().map_err(|e| Error::invalid(format!("step {i}: {e}"))))
            .collect::<Result<Vec<_>>>()?;
        LoopProgram::new(self.num_qubits, steps)
    }
}

impl StepRecord {
    fn to_step(&self) -> Result<LoopStep<f64>> {
        let plane = self.plane.as_deref().map(str::parse::<PlaneKind>).transpose()?;
        match self.kind {
            StepKind::SingleQubitPlaneLoop => {
                if self.control.is_some() || self.target.is_some() {
                    return Err(Error::invalid("plane loops take `qubit`, not `control`/`target`"));
                }
                let qubit = self.qubit.ok_or_else(|| Error::invalid("missing `qubit`"))?;
                let plane = plane.ok_or_else(|| Error::invalid("missing `plane`"))?;
                if plane == PlaneKind::Grassmann {
                    return Err(Error::invalid("plane loops need a CP² plane"));
                }
                Ok(LoopStep::PlaneLoop { qubit, plane, area: self.area_in(plane)? })
            }
            StepKind::ControlledPhase => {
                if self.qubit.is_some() {
                    return Err(Error::invalid("controlled phase takes `control`/`target`, not `qubit`"));
                }
                if plane.is_some_and(|p| p != PlaneKind::Grassmann) {
                    return Err(Error::invalid("controlled phase lives on the grassmann plane"));
                }
                let control = self.control.ok_or_else(|| Error::invalid("missing `control`"))?;
                let target = self.target.ok_or_else(|| Error::invalid("missing `target`"))?;
                Ok(LoopStep::ControlledPhase { control, target, area: self.area_in(PlaneKind::Grassmann)? })
            }
        }
    }

    fn area_in(&self, plane: PlaneKind) -> Result<f64> {
        match (self.area, self.rect) {
            (Some(area), None) => Ok(area),
            (None, Some(RectExtents { a, b })) => {
                projected_area(&rectangle_loop(&PlaneSpec::canonical(plane), a, b, 1)?)
            }
            _ => Err(Error::invalid("exactly one of `area` and `rect` is required")),
        }
    }
}
