use std::f64::consts::PI;

use gamecircle_core::bots::{BotKind, Command};
use gamecircle_core::engine::{BattleConfig, BattleState, EventKind};
use gamecircle_core::gametree::{
    alphabeta_value, minimax_value, GameTree, LayerKind, NodeId, TreeNode,
};
use gamecircle_core::geometry::{
    fit_arc, normalize_angle, predict_point, radar_sweep_back, Angle, ArcPath, Pose, TargetMotion,
};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_tree(seed: u64, max_depth: usize, max_branching: usize) -> GameTree {
    fn grow(
        rng: &mut ChaCha8Rng,
        nodes: &mut Vec<TreeNode>,
        kind: LayerKind,
        depth: usize,
        max_branching: usize,
    ) -> NodeId {
        let id = NodeId(nodes.len());
        nodes.push(TreeNode {
            name: format!("n{}", id.0),
            kind,
            children: Vec::new(),
            value: None,
            label: None,
        });
        if depth == 0 || (id.0 > 0 && rng.gen_bool(0.15)) {
            nodes[id.0].value = Some(f64::from(rng.gen_range(-50..=200)));
            return id;
        }
        let n = rng.gen_range(1..=max_branching);
        for _ in 0..n {
            let child = grow(rng, nodes, kind.flip(), depth - 1, max_branching);
            nodes[id.0].children.push(child);
        }
        id
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut nodes = Vec::new();
    let depth = rng.gen_range(1..=max_depth);
    let kind = if rng.gen_bool(0.5) {
        LayerKind::Max
    } else {
        LayerKind::Min
    };
    let root = grow(&mut rng, &mut nodes, kind, depth, max_branching);
    GameTree::new("random", root, nodes).unwrap()
}

proptest! {
    #[test]
    fn alphabeta_agrees_with_minimax(seed in any::<u64>()) {
        let tree = random_tree(seed, 5, 4);
        let full = minimax_value(&tree);
        let cut = alphabeta_value(&tree);
        prop_assert_eq!(cut.value, full.value);
        prop_assert_eq!(cut.principal_child, full.principal_child);
        prop_assert!(cut.visited <= full.visited);
        prop_assert_eq!(full.pruned, 0);
    }

    #[test]
    fn text_form_round_trips(seed in any::<u64>()) {
        let tree = random_tree(seed, 4, 3);
        let back = GameTree::parse("random", &tree.to_text()).unwrap();
        prop_assert_eq!(minimax_value(&back).value, minimax_value(&tree).value);
        prop_assert_eq!(back.leaf_values(), tree.leaf_values());
    }

    #[test]
    fn normalized_angles_land_in_half_open_range(r in -1e4f64..1e4) {
        let a = normalize_angle(Angle::from_radians(r)).unwrap().radians();
        prop_assert!(a > -PI && a <= PI);
        let turns = (r - a) / (2.0 * PI);
        prop_assert!((turns - turns.round()).abs() < 1e-6);
    }

    #[test]
    fn sweep_back_is_normalized(r in -10f64..10.0, h in -10f64..10.0, b in -10f64..10.0) {
        let s = radar_sweep_back(Angle::from_radians(r), Angle::from_radians(h), Angle::from_radians(b))
            .unwrap()
            .radians();
        prop_assert!(s > -PI && s <= PI);
    }

    #[test]
    fn predicted_points_lie_on_the_circle(radius in 1e-3f64..1e4, theta in -10f64..10.0) {
        let (x, y) = predict_point(radius, Angle::from_radians(theta)).unwrap();
        prop_assert!(((x * x + y * y) - radius * radius).abs() <= 1e-9 * radius * radius);
    }

    #[test]
    fn heading_change_equals_central_angle(
        radius in 5f64..500.0,
        rate in prop_oneof![-0.3f64..-0.01, 0.01f64..0.3],
        heading in -PI..PI,
        ticks in 1u32..40,
    ) {
        let start = Pose::new(300.0, 200.0, Angle::from_radians(heading));
        let path = ArcPath::from_motion(start, radius * rate.abs(), rate).unwrap();
        let phase0 = path.phase_of(start.x, start.y);
        let (x, y) = path.position_at(phase0, f64::from(ticks));
        let central = (path.phase_of(x, y) - phase0).normalized();
        let heading_change = Angle::from_radians(rate * f64::from(ticks)).normalized();
        prop_assert!((central - heading_change).normalized().radians().abs() < 1e-9);
    }

    #[test]
    fn fit_arc_recovers_the_radius(
        radius in 10f64..1000.0,
        step in prop_oneof![-0.5f64..-0.005, 0.005f64..0.5],
        heading in -PI..PI,
    ) {
        let start = Pose::new(400.0, 300.0, Angle::from_radians(heading));
        let path = ArcPath::from_motion(start, radius * step.abs(), step).unwrap();
        let phase0 = path.phase_of(start.x, start.y);
        let (x, y) = path.position_at(phase0, 1.0);
        let end = Pose::new(x, y, Angle::from_radians(heading + step));
        match fit_arc(start, end, 1.0).unwrap() {
            TargetMotion::Arc(fit) => {
                prop_assert!((fit.radius - radius).abs() <= 1e-6 * radius);
                prop_assert!((fit.center.0 - path.center.0).abs() <= 1e-6 * radius);
                prop_assert!((fit.center.1 - path.center.1).abs() <= 1e-6 * radius);
            }
            TargetMotion::Straight => prop_assert!(false, "turning target fitted as straight"),
        }
    }
}

fn random_command(rng: &mut ChaCha8Rng) -> Command {
    Command {
        target_velocity: rng.gen_range(-12.0..12.0),
        body_turn: Angle::from_degrees(rng.gen_range(-30.0..30.0)),
        gun_turn: Angle::from_degrees(rng.gen_range(-40.0..40.0)),
        radar_turn: Angle::from_degrees(rng.gen_range(-90.0..90.0)),
        fire_power: rng.gen_bool(0.3).then(|| rng.gen_range(0.0..4.0)),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    /// Every energy change is explained by the tick's events, and tanks stay
    /// inside the arena under their speed limit.
    #[test]
    fn energy_is_audited_and_bounds_hold(seed in any::<u64>(), bots in 2usize..6) {
        let cfg = BattleConfig { inactivity_time: 60, ..BattleConfig::default() };
        let mut state = BattleState::new(cfg, bots, 0, seed).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xA5);
        for _ in 0..300 {
            if state.is_over() {
                break;
            }
            let before: Vec<f64> = state.tanks().iter().map(|t| t.energy).collect();
            let heat: Vec<f64> = state.tanks().iter().map(|t| t.gun_heat).collect();
            let cmds: Vec<Option<Command>> = state
                .tanks()
                .iter()
                .map(|t| t.alive.then(|| random_command(&mut rng)))
                .collect();
            let events = state.tick(&cmds);
            let mut delta = vec![0.0; bots];
            for e in &events {
                match e.kind {
                    EventKind::BulletHit { shooter, victim, damage, gain, .. } => {
                        delta[victim] -= damage;
                        delta[shooter] += gain;
                    }
                    EventKind::Fire { bot, power, .. } => {
                        prop_assert!(heat[bot] <= 1e-9, "fired with a warm gun");
                        delta[bot] -= power;
                    }
                    EventKind::WallHit { bot, damage, .. } => delta[bot] -= damage,
                    EventKind::Decay { bot, amount } => delta[bot] -= amount,
                    _ => {}
                }
            }
            for (i, t) in state.tanks().iter().enumerate() {
                prop_assert!((t.energy - before[i] - delta[i]).abs() < 1e-9);
                prop_assert!(t.energy >= 0.0 && t.gun_heat >= 0.0);
                prop_assert!(t.velocity.abs() <= cfg.physics.max_velocity);
                prop_assert!(t.pose.x >= 18.0 && t.pose.x <= 782.0);
                prop_assert!(t.pose.y >= 18.0 && t.pose.y <= 582.0);
            }
        }
    }

    /// Every hit or miss refers to one earlier shot, and nobody dies twice.
    #[test]
    fn event_log_is_causal(seed in 0u64..1000) {
        let cfg = BattleConfig { rounds: 1, seed, ..BattleConfig::default() };
        let result = gamecircle_core::engine::run_battle(
            &cfg,
            &[BotKind::TestRobot, BotKind::SpinBot, BotKind::Walls],
        )
        .unwrap();
        let mut fired = std::collections::HashSet::new();
        let mut resolved = std::collections::HashSet::new();
        let mut dead = std::collections::HashSet::new();
        let mut last_tick = 0;
        for e in result.events() {
            prop_assert!(e.tick >= last_tick);
            last_tick = e.tick;
            match e.kind {
                EventKind::Fire { bullet, .. } => prop_assert!(fired.insert(bullet)),
                EventKind::BulletHit { bullet, .. } | EventKind::BulletMiss { bullet, .. } => {
                    prop_assert!(fired.contains(&bullet));
                    prop_assert!(resolved.insert(bullet));
                }
                EventKind::RobotDeath { bot, .. } => prop_assert!(dead.insert(bot)),
                _ => {}
            }
        }
    }
}
