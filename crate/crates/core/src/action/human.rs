use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::action::camera::{
    move_camera_click, move_camera_scroll, screen_to_world, Camera, Display, ScrollDir,
};
use crate::action::ActionError;
use crate::geom::{Point, Rect};
use crate::sim::{Entity, GameState, Owner, ResolvedCommand, Tag, UnitKind, Verb};

/// The six human action kinds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum HumanKind {
    BuildPylon,
    ProduceProbe,
    CollectMineral,
    SelectPoint,
    SelectRect,
    MoveCamera,
}

impl HumanKind {
    pub const ALL: [HumanKind; 6] = [
        HumanKind::BuildPylon,
        HumanKind::ProduceProbe,
        HumanKind::CollectMineral,
        HumanKind::SelectPoint,
        HumanKind::SelectRect,
        HumanKind::MoveCamera,
    ];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(i: usize) -> Option<Self> {
        Self::ALL.get(i).copied()
    }

    pub fn is_command(self) -> bool {
        matches!(
            self,
            HumanKind::BuildPylon | HumanKind::ProduceProbe | HumanKind::CollectMineral
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum CameraMode {
    /// C_0: screen observation and selection limited to the camera.
    Real,
    /// C_1: only off-camera opponent detail is hidden; own units stay addressable.
    Virtual,
    /// No camera constraint.
    None,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HumanAction {
    pub kind: HumanKind,
    pub screen_point: Option<Point>,
    pub screen_rect: Option<Rect>,
    pub minimap_point: Option<Point>,
    pub scroll: Option<ScrollDir>,
}

impl HumanAction {
    fn bare(kind: HumanKind) -> Self {
        Self {
            kind,
            screen_point: None,
            screen_rect: None,
            minimap_point: None,
            scroll: None,
        }
    }

    pub fn select_point(p: Point) -> Self {
        Self {
            screen_point: Some(p),
            ..Self::bare(HumanKind::SelectPoint)
        }
    }

    pub fn select_rect(r: Rect) -> Self {
        Self {
            screen_rect: Some(r),
            ..Self::bare(HumanKind::SelectRect)
        }
    }

    pub fn build_pylon(p: Point) -> Self {
        Self {
            screen_point: Some(p),
            ..Self::bare(HumanKind::BuildPylon)
        }
    }

    pub fn produce_probe() -> Self {
        Self::bare(HumanKind::ProduceProbe)
    }

    pub fn collect_mineral() -> Self {
        Self::bare(HumanKind::CollectMineral)
    }

    pub fn camera_click(minimap_point: Point) -> Self {
        Self {
            minimap_point: Some(minimap_point),
            ..Self::bare(HumanKind::MoveCamera)
        }
    }

    pub fn camera_scroll(dir: ScrollDir) -> Self {
        Self {
            scroll: Some(dir),
            ..Self::bare(HumanKind::MoveCamera)
        }
    }
}

/// Interface-side state a human player carries between actions.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UiState {
    pub selection: BTreeSet<Tag>,
    pub camera: Camera,
}

impl UiState {
    /// Empty selection with the camera over the own Nexus (or the map origin).
    pub fn initial(state: &GameState) -> Self {
        let cfg = &state.config;
        let center = state.own_nexus().map(|n| n.position).unwrap_or_default();
        Self {
            selection: BTreeSet::new(),
            camera: Camera::new(center, f64::from(cfg.map_w), f64::from(cfg.map_h)),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HumanConfig {
    pub display: Display,
    /// Max distance (game units) from a click to a unit's footprint for it to be picked.
    pub selection_radius: f64,
    /// Game-seconds one scroll action pans for.
    pub scroll_dt: f64,
}

impl Default for HumanConfig {
    fn default() -> Self {
        Self {
            display: Display::default(),
            selection_radius: 1.5,
            scroll_dt: 0.5,
        }
    }
}

fn visible(e: &Entity, camera: &Camera, mode: CameraMode, state: &GameState) -> bool {
    match mode {
        CameraMode::Real => camera
            .rect()
            .intersects_disc(e.position, e.kind.radius(&state.config)),
        CameraMode::Virtual | CameraMode::None => true,
    }
}

/// Resolves one human action. The returned UI state is always the one to carry forward,
/// including when the action fails (a missed click clears the selection).
pub fn resolve_human(
    state: &GameState,
    ui: &UiState,
    action: &HumanAction,
    camera_mode: CameraMode,
    cfg: &HumanConfig,
) -> (UiState, Result<Option<ResolvedCommand>, ActionError>) {
    let mut ui = ui.clone();
    ui.selection.retain(|t| {
        state
            .entity(*t)
            .is_some_and(|e| e.owner == Owner::Own)
    });
    let display = &cfg.display;
    let result = match action.kind {
        HumanKind::SelectPoint => (|| {
            let sp = action.screen_point.ok_or(ActionError::MissingTarget)?;
            let world = screen_to_world(&ui.camera, display, sp)?;
            let picked = state
                .entities
                .iter()
                .filter(|e| e.owner == Owner::Own && visible(e, &ui.camera, camera_mode, state))
                .filter(|e| {
                    (e.position.dist(world) - e.kind.radius(&state.config)).max(0.0) <= cfg.selection_radius
                })
                .min_by(|a, b| {
                    a.position
                        .dist_sq(world)
                        .total_cmp(&b.position.dist_sq(world))
                        .then(a.tag.cmp(&b.tag))
                });
            match picked {
                Some(e) => {
                    ui.selection = BTreeSet::from([e.tag]);
                    Ok(None)
                }
                None => {
                    ui.selection.clear();
                    Err(ActionError::NothingSelected)
                }
            }
        })(),
        HumanKind::SelectRect => (|| {
            let r = action.screen_rect.ok_or(ActionError::MissingTarget)?;
            let a = screen_to_world(&ui.camera, display, r.min)?;
            let b = screen_to_world(&ui.camera, display, r.max)?;
            let world = Rect::from_corners(a, b);
            let picked: BTreeSet<Tag> = state
                .entities
                .iter()
                .filter(|e| e.owner == Owner::Own && visible(e, &ui.camera, camera_mode, state))
                .filter(|e| world.contains(e.position))
                .map(|e| e.tag)
                .collect();
            if picked.is_empty() {
                ui.selection.clear();
                Err(ActionError::NothingSelected)
            } else {
                ui.selection = picked;
                Ok(None)
            }
        })(),
        HumanKind::MoveCamera => (|| {
            ui.camera = match (action.minimap_point, action.scroll) {
                (Some(p), _) => move_camera_click(&ui.camera, display, p)?,
                (None, Some(dir)) => move_camera_scroll(&ui.camera, display, dir, cfg.scroll_dt),
                (None, None) => return Err(ActionError::MissingTarget),
            };
            Ok(None)
        })(),
        HumanKind::ProduceProbe => pick_selected(state, &ui, UnitKind::Nexus)
            .map(|tag| Some(ResolvedCommand::single(Verb::ProduceProbe, tag))),
        HumanKind::BuildPylon => (|| {
            let tag = pick_selected(state, &ui, UnitKind::Probe)?;
            let sp = action.screen_point.ok_or(ActionError::MissingTarget)?;
            let world = screen_to_world(&ui.camera, display, sp)?;
            Ok(Some(ResolvedCommand::single(Verb::BuildPylon, tag).with_target(world)))
        })(),
        HumanKind::CollectMineral => (|| {
            if ui.selection.is_empty() {
                return Err(ActionError::NoSelection);
            }
            let probes: Vec<Tag> = ui
                .selection
                .iter()
                .copied()
                .filter(|t| state.entity(*t).is_some_and(|e| e.kind == UnitKind::Probe))
                .collect();
            if probes.is_empty() {
                return Err(ActionError::IncompatibleActor);
            }
            Ok(Some(ResolvedCommand {
                verb: Verb::CollectMineral,
                actors: probes,
                target_location: None,
                target_tag: None,
            }))
        })(),
    };
    (ui, result)
}

/// Lowest-tag selected unit of `kind`.
fn pick_selected(state: &GameState, ui: &UiState, kind: UnitKind) -> Result<Tag, ActionError> {
    if ui.selection.is_empty() {
        return Err(ActionError::NoSelection);
    }
    ui.selection
        .iter()
        .copied()
        .find(|t| state.entity(*t).is_some_and(|e| e.kind == kind))
        .ok_or(ActionError::IncompatibleActor)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::action::camera::world_to_screen;
    use crate::action::{resolve_raw, RawAction, RawKind};
    use crate::sim::{entity_view, Order, SimConfig};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn cfg() -> HumanConfig {
        HumanConfig::default()
    }

    fn world_to_minimap(state: &GameState, p: Point) -> Point {
        let d = cfg().display;
        Point::new(
            p.x * d.minimap_w / f64::from(state.config.map_w),
            p.y * d.minimap_h / f64::from(state.config.map_h),
        )
    }

    fn click_on(state: &GameState, ui: &UiState, tag: Tag) -> HumanAction {
        let pos = state.entity(tag).unwrap().position;
        HumanAction::select_point(world_to_screen(&ui.camera, &cfg().display, pos).unwrap())
    }

    #[test]
    fn probe_selection_cannot_produce() {
        let state = GameState::new_game(SimConfig::default(), 7).unwrap();
        let ui = UiState::initial(&state);
        let probe = entity_view(&state).tag_at(1).unwrap();
        let (ui, r) = resolve_human(&state, &ui, &click_on(&state, &ui, probe), CameraMode::None, &cfg());
        assert_eq!(r, Ok(None));
        assert_eq!(ui.selection, BTreeSet::from([probe]));
        let (_, r) = resolve_human(&state, &ui, &HumanAction::produce_probe(), CameraMode::None, &cfg());
        assert_eq!(r, Err(ActionError::IncompatibleActor));
    }

    #[test]
    fn nexus_click_then_produce() {
        let state = GameState::new_game(SimConfig::default(), 7).unwrap();
        let nexus = state.own_nexus().unwrap().tag;
        let ui = UiState::initial(&state);
        let (ui, _) = resolve_human(&state, &ui, &click_on(&state, &ui, nexus), CameraMode::None, &cfg());
        let (_, r) = resolve_human(&state, &ui, &HumanAction::produce_probe(), CameraMode::None, &cfg());
        assert_eq!(r, Ok(Some(ResolvedCommand::single(Verb::ProduceProbe, nexus))));
    }

    #[test]
    fn command_without_selection() {
        let state = GameState::new_game(SimConfig::default(), 7).unwrap();
        let ui = UiState::initial(&state);
        for a in [HumanAction::produce_probe(), HumanAction::collect_mineral()] {
            let (_, r) = resolve_human(&state, &ui, &a, CameraMode::None, &cfg());
            assert_eq!(r, Err(ActionError::NoSelection));
        }
    }

    fn probe_grid_state() -> GameState {
        let mut state = GameState::empty(SimConfig::default(), 1).unwrap();
        state.spawn(UnitKind::Nexus, Owner::Own, Point::new(16.0, 16.0), None);
        for i in 0..12 {
            let p = Point::new(4.0 + 2.0 * f64::from(i % 4), 8.0 + 3.0 * f64::from(i / 4));
            state.spawn(UnitKind::Probe, Owner::Own, p, Some(Order::Harvest));
        }
        state
    }

    #[test]
    fn rect_selects_exactly_enclosed_probes() {
        let state = probe_grid_state();
        let ui = UiState::initial(&state);
        let d = cfg().display;
        let world = Rect::from_corners(Point::new(5.0, 7.0), Point::new(11.0, 9.0));
        let a = world_to_screen(&ui.camera, &d, world.min).unwrap();
        let b = world_to_screen(&ui.camera, &d, world.max).unwrap();
        let (ui2, r) = resolve_human(
            &state,
            &ui,
            &HumanAction::select_rect(Rect::from_corners(a, b)),
            CameraMode::None,
            &cfg(),
        );
        assert_eq!(r, Ok(None));
        let expected: BTreeSet<Tag> = state
            .entities
            .iter()
            .filter(|e| e.owner == Owner::Own && world.contains(e.position))
            .map(|e| e.tag)
            .collect();
        assert_eq!(expected.len(), 3);
        assert_eq!(ui2.selection, expected);
    }

    #[test]
    fn miss_clears_selection() {
        let state = probe_grid_state();
        let ui = UiState::initial(&state);
        let probe = Tag(2);
        let (ui, _) = resolve_human(&state, &ui, &click_on(&state, &ui, probe), CameraMode::None, &cfg());
        assert!(!ui.selection.is_empty());
        let far = world_to_screen(&ui.camera, &cfg().display, Point::new(28.0, 24.0)).unwrap();
        let (ui, r) = resolve_human(&state, &ui, &HumanAction::select_point(far), CameraMode::None, &cfg());
        assert_eq!(r, Err(ActionError::NothingSelected));
        assert!(ui.selection.is_empty());
    }

    #[test]
    fn tie_goes_to_lower_tag() {
        let mut state = GameState::empty(SimConfig::default(), 1).unwrap();
        let a = state.spawn(UnitKind::Probe, Owner::Own, Point::new(10.0, 10.0), None);
        let _b = state.spawn(UnitKind::Probe, Owner::Own, Point::new(12.0, 10.0), None);
        let ui = UiState::initial(&state);
        let mid = world_to_screen(&ui.camera, &cfg().display, Point::new(11.0, 10.0)).unwrap();
        let (ui, _) = resolve_human(&state, &ui, &HumanAction::select_point(mid), CameraMode::None, &cfg());
        assert_eq!(ui.selection, BTreeSet::from([a]));
    }

    #[test]
    fn commands_keep_selection_and_fan_out() {
        let state = probe_grid_state();
        let ui = UiState {
            selection: BTreeSet::from([Tag(1), Tag(3), Tag(5)]),
            camera: UiState::initial(&state).camera,
        };
        let (ui2, r) = resolve_human(&state, &ui, &HumanAction::collect_mineral(), CameraMode::None, &cfg());
        assert_eq!(ui2, ui);
        assert_eq!(r.unwrap().unwrap().actors, vec![Tag(3), Tag(5)]);
        let target = world_to_screen(&ui.camera, &cfg().display, Point::new(20.0, 20.0)).unwrap();
        let (_, r) = resolve_human(&state, &ui, &HumanAction::build_pylon(target), CameraMode::None, &cfg());
        let cmd = r.unwrap().unwrap();
        assert_eq!(cmd.actors, vec![Tag(3)]);
        assert!(cmd.target_location.unwrap().dist(Point::new(20.0, 20.0)) < 1e-9);
    }

    #[test]
    fn dead_units_pruned_from_selection() {
        let mut state = probe_grid_state();
        let ui = UiState {
            selection: BTreeSet::from([Tag(2), Tag(3)]),
            camera: UiState::initial(&state).camera,
        };
        state.remove(Tag(2));
        let (ui, _) = resolve_human(&state, &ui, &HumanAction::produce_probe(), CameraMode::None, &cfg());
        assert_eq!(ui.selection, BTreeSet::from([Tag(3)]));
    }

    #[test]
    fn real_camera_hides_off_screen_units() {
        let mut state = GameState::empty(SimConfig::default(), 1).unwrap();
        state.spawn(UnitKind::Nexus, Owner::Own, Point::new(16.0, 16.0), None);
        let far = state.spawn(UnitKind::Probe, Owner::Own, Point::new(50.0, 50.0), None);
        let ui = UiState::initial(&state);
        assert!(!ui.camera.rect().contains(Point::new(50.0, 50.0)));
        // A huge rectangle in screen space still only spans the camera.
        let rect = Rect::from_corners(Point::new(0.0, 0.0), Point::new(256.0, 160.0));
        let (ui_real, _) =
            resolve_human(&state, &ui, &HumanAction::select_rect(rect), CameraMode::Real, &cfg());
        assert!(!ui_real.selection.contains(&far));
    }

    #[test]
    fn camera_actions_stay_in_bounds() {
        let state = GameState::new_game(SimConfig::default(), 3).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let mut ui = UiState::initial(&state);
        for _ in 0..500 {
            let a = if rng.gen_bool(0.5) {
                HumanAction::camera_click(Point::new(rng.gen_range(0.0..64.0), rng.gen_range(0.0..64.0)))
            } else {
                HumanAction::camera_scroll(ScrollDir::ALL[rng.gen_range(0..4)])
            };
            let (next, r) = resolve_human(&state, &ui, &a, CameraMode::Real, &cfg());
            assert_eq!(r, Ok(None));
            let map = Rect::from_corners(Point::new(0.0, 0.0), Point::new(64.0, 64.0));
            assert!(map.contains_rect(&next.camera.rect()));
            assert_eq!(next.selection, ui.selection);
            ui = next;
        }
    }

    /// Replays a raw command through the human interface: recenter on the actor, click it,
    /// recenter on the target if any, then issue the verb.
    fn human_witness(state: &GameState, raw: &RawAction, mode: CameraMode) -> Option<ResolvedCommand> {
        let view = entity_view(state);
        let tag = view.tag_at(raw.selected_index)?;
        let pos = state.entity(tag)?.position;
        let mut ui = UiState::initial(state);
        let mut script = vec![HumanAction::camera_click(world_to_minimap(state, pos))];
        let (next, _) = resolve_human(state, &ui, &script[0], mode, &cfg());
        ui = next;
        script.push(click_on(state, &ui, tag));
        let (next, r) = resolve_human(state, &ui, &script[1], mode, &cfg());
        r.ok()?;
        ui = next;
        let last = match raw.kind {
            RawKind::ProduceProbe => HumanAction::produce_probe(),
            RawKind::CollectMineral => HumanAction::collect_mineral(),
            RawKind::BuildPylon => {
                let target = raw.target_location?;
                let (next, _) = resolve_human(
                    state,
                    &ui,
                    &HumanAction::camera_click(world_to_minimap(state, target)),
                    mode,
                    &cfg(),
                );
                ui = next;
                HumanAction::build_pylon(world_to_screen(&ui.camera, &cfg().display, target).ok()?)
            }
        };
        resolve_human(state, &ui, &last, mode, &cfg()).1.ok()?
    }

    #[test]
    fn raw_commands_reachable_through_human_interface() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let mut checked = 0;
        for seed in 0..4 {
            let mut state = GameState::new_game(SimConfig::default(), seed).unwrap();
            for _ in 0..300 {
                let kind = RawKind::ALL[rng.gen_range(0..3)];
                let index = rng.gen_range(0..8);
                let raw = RawAction {
                    kind,
                    selected_index: index,
                    target_location: Some(Point::new(rng.gen_range(1.0..63.0), rng.gen_range(1.0..63.0))),
                };
                if let Ok(cmd) = resolve_raw(&state, &raw) {
                    for mode in [CameraMode::None, CameraMode::Virtual, CameraMode::Real] {
                        let got = human_witness(&state, &raw, mode).expect("human witness");
                        assert_eq!(got.verb, cmd.verb);
                        assert_eq!(got.actors, cmd.actors);
                        match (got.target_location, cmd.target_location) {
                            (Some(a), Some(b)) => assert!(a.dist(b) < 1e-9),
                            (None, None) => {}
                            other => panic!("target mismatch {other:?}"),
                        }
                    }
                    checked += 1;
                    state.tick(&cmd).unwrap();
                } else {
                    state.tick(&ResolvedCommand::noop()).unwrap();
                }
            }
        }
        assert!(checked > 100);
    }
}
