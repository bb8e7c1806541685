use crate::engine::PhysicsConstants;
use crate::gametree::{choose_radius, LayerKind, TreeError, CANDIDATE_RADII};

/// Leaf payoffs for the radius search.
///
/// The tank (MAX) picks the radius of its next escape arc, the opponent (MIN)
/// picks the radius of its approach arc. A leaf is worth the lateral distance,
/// floored to whole units, that the tank covers on its arc while an incoming
/// bullet is in flight. The opponent's approach shortens that flight. An arc
/// whose full circle (diameter `2r`) does not fit in the clear space ahead is
/// worth nothing.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThreatModel {
    pub distance: f64,
    pub wall_clearance: f64,
    pub bullet_speed: f64,
    pub physics: PhysicsConstants,
}

impl ThreatModel {
    pub fn new(distance: f64, wall_clearance: f64, bullet_speed: f64) -> Self {
        ThreatModel {
            distance,
            wall_clearance,
            bullet_speed,
            physics: PhysicsConstants::default(),
        }
    }

    /// Chord covered in `ticks` on an arc of `radius` at its top speed.
    fn chord(&self, radius: f64, ticks: f64) -> f64 {
        let v = self.physics.speed_for_radius(radius);
        let swept = (v * ticks / radius).min(core::f64::consts::PI);
        2.0 * radius * libm::sin(swept / 2.0)
    }

    fn flight(&self, distance: f64) -> f64 {
        distance.max(self.physics.tank_size) / self.bullet_speed
    }

    /// Payoff of the path `[own radius, opponent radius]`.
    pub fn payoff(&self, path: &[f64]) -> f64 {
        let Some(&own) = path.first() else {
            return 0.0;
        };
        if 2.0 * own > self.wall_clearance {
            return 0.0;
        }
        let closing = path
            .get(1)
            .map_or(0.0, |&r| self.chord(r, self.flight(self.distance)));
        let ticks = self.flight(self.distance - closing);
        libm::floor(self.chord(own, ticks))
    }

    /// The radius the tank should follow next.
    pub fn choose(&self) -> Result<f64, TreeError> {
        choose_radius(&CANDIDATE_RADII, |p| self.payoff(p), 2, LayerKind::Max)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixture_geometry_picks_thirty() {
        let m = ThreatModel::new(200.0, 70.0, 14.0);
        assert_eq!(m.choose().unwrap(), 30.0);
    }

    #[test]
    fn arcs_that_do_not_fit_are_worthless() {
        let m = ThreatModel::new(200.0, 70.0, 14.0);
        assert_eq!(m.payoff(&[40.0, 20.0]), 0.0);
        assert!(m.payoff(&[30.0, 20.0]) > m.payoff(&[20.0, 20.0]));
    }

    #[test]
    fn open_field_prefers_wide_arcs() {
        let m = ThreatModel::new(300.0, 1000.0, 14.0);
        assert!(m.choose().unwrap() >= 100.0);
    }

    #[test]
    fn a_faster_approach_costs_more() {
        let m = ThreatModel::new(300.0, 1000.0, 14.0);
        assert!(m.payoff(&[80.0, 160.0]) <= m.payoff(&[80.0, 20.0]));
    }
}
