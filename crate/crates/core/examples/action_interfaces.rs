//! Resolves the same intent through the raw and the human interface.

use rtsfair::action::{
    action_space_size, resolve_human, resolve_raw, world_to_screen, ActionSpaceConfig, CameraMode, HumanAction,
    HumanConfig, Interface, RawAction, RawKind, UiState,
};
use rtsfair::sim::{entity_view, GameState, SimConfig};

fn main() {
    let state = GameState::new_game(SimConfig::default(), 1).expect("valid config");
    let view = entity_view(&state);
    println!("entity view ({} rows):", view.len());
    for (i, row) in view.rows.iter().enumerate() {
        println!("  {i}: {:?} tag {:?}", row.kind, row.entity.tag);
    }

    // Raw: one action names the actor by view index.
    let raw = resolve_raw(&state, &RawAction::new(RawKind::ProduceProbe, 0));
    println!("raw ProduceProbe index 0 -> {raw:?}");
    println!("raw ProduceProbe index 1 -> {:?}", resolve_raw(&state, &RawAction::new(RawKind::ProduceProbe, 1)));

    // Human: select the Nexus by clicking its screen position, then issue the command.
    let cfg = HumanConfig::default();
    let ui = UiState::initial(&state);
    let nexus = state.own_nexus().expect("nexus").position;
    let click = world_to_screen(&ui.camera, &cfg.display, nexus).expect("nexus on screen");
    let (ui, r) = resolve_human(&state, &ui, &HumanAction::select_point(click), CameraMode::Real, &cfg);
    println!("human SelectPoint {click:?} -> {r:?}, selection {:?}", ui.selection);
    let (_, r) = resolve_human(&state, &ui, &HumanAction::produce_probe(), CameraMode::Real, &cfg);
    println!("human ProduceProbe -> {r:?}");

    let proto = ActionSpaceConfig::prototype();
    println!(
        "action space: raw {} human {}",
        action_space_size(Interface::Raw, &proto),
        action_space_size(Interface::Human, &proto)
    );
}
