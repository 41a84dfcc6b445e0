use crate::action::UiState;
use crate::sim::GameState;

/// An action is effective iff it changed the authoritative state or the UI state.
/// `post_*` must come from `GameState::apply_command` and interface resolution only,
/// before the economy advances.
pub fn classify_effective(
    pre_state: &GameState,
    post_state: &GameState,
    pre_ui: Option<&UiState>,
    post_ui: Option<&UiState>,
) -> bool {
    if pre_state.canonical_bytes() != post_state.canonical_bytes() {
        return true;
    }
    match (pre_ui, post_ui) {
        (Some(a), Some(b)) => a.selection != b.selection || a.camera.center() != b.camera.center(),
        (None, None) => false,
        _ => true,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::action::{resolve_human, CameraMode, HumanAction, HumanConfig};
    use crate::action::{resolve_raw, world_to_screen, RawAction, RawKind};
    use crate::geom::Point;
    use crate::sim::SimConfig;

    fn human_step(state: &GameState, ui: &UiState, a: &HumanAction) -> (GameState, UiState, bool) {
        let (next_ui, r) = resolve_human(state, ui, a, CameraMode::None, &HumanConfig::default());
        let mut next = state.clone();
        if let Ok(Some(cmd)) = r {
            next.apply_command(&cmd);
        }
        let eff = classify_effective(state, &next, Some(ui), Some(&next_ui));
        (next, next_ui, eff)
    }

    #[test]
    fn repeated_select_is_ineffective() {
        let state = GameState::new_game(SimConfig::default(), 7).unwrap();
        let ui = UiState::initial(&state);
        let nexus = state.own_nexus().unwrap().position;
        let click = HumanAction::select_point(world_to_screen(&ui.camera, &Default::default(), nexus).unwrap());
        let (s1, ui1, e1) = human_step(&state, &ui, &click);
        let (_, _, e2) = human_step(&s1, &ui1, &click);
        assert!(e1);
        assert!(!e2);
    }

    #[test]
    fn first_produce_effective_second_not() {
        let state = GameState::new_game(SimConfig::default(), 7).unwrap();
        let cmd = resolve_raw(&state, &RawAction::new(RawKind::ProduceProbe, 0)).unwrap();
        let mut s1 = state.clone();
        s1.apply_command(&cmd);
        assert!(classify_effective(&state, &s1, None, None));
        let mut s2 = s1.clone();
        s2.apply_command(&cmd);
        assert!(!classify_effective(&s1, &s2, None, None));
    }

    #[test]
    fn camera_to_current_center_is_ineffective() {
        let state = GameState::new_game(SimConfig::default(), 7).unwrap();
        let ui = UiState::initial(&state);
        let c = ui.camera.center();
        let (_, _, eff) = human_step(&state, &ui, &HumanAction::camera_click(c));
        assert!(!eff);
        let (_, _, eff) = human_step(&state, &ui, &HumanAction::camera_click(Point::new(40.0, 40.0)));
        assert!(eff);
    }
}
