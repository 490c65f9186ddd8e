use serde::{Deserialize, Serialize};

use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BatteryParams {
    pub voltage: f64,
    pub capacity_ah: f64,
    /// Current drawn while airborne. 6.6 A drains 1.1 Ah in ten minutes.
    pub hover_draw_a: f64,
}

impl Default for BatteryParams {
    fn default() -> Self {
        Self {
            voltage: 3.8,
            capacity_ah: 1.1,
            hover_draw_a: 6.6,
        }
    }
}

impl BatteryParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.capacity_ah > 0.0) || !self.capacity_ah.is_finite() {
            return Err(Error::invalid_field("battery.capacity_ah", "must be > 0"));
        }
        if !(self.hover_draw_a >= 0.0) || !self.hover_draw_a.is_finite() {
            return Err(Error::invalid_field("battery.hover_draw_a", "must be >= 0"));
        }
        if !(self.voltage > 0.0) {
            return Err(Error::invalid_field("battery.voltage", "must be > 0"));
        }
        Ok(())
    }

    pub fn full(&self) -> BatteryState {
        BatteryState {
            voltage: self.voltage,
            capacity_ah: self.capacity_ah,
            charge_ah: self.capacity_ah,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BatteryState {
    pub voltage: f64,
    pub capacity_ah: f64,
    pub charge_ah: f64,
}

/// Coulomb counting: `charge' = max(0, charge - draw·dt/3600)`.
/// Returns the new state and whether it is now empty.
pub fn battery_step(b: &BatteryState, draw_amps: f64, dt: f64) -> (BatteryState, bool) {
    let used = draw_amps.max(0.0) * dt.max(0.0) / 3600.0;
    let charge_ah = (b.charge_ah - used).max(0.0);
    (BatteryState { charge_ah, ..*b }, charge_ah == 0.0)
}
