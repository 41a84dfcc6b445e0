//! Compares what the virtual and the real camera let the agent see.

use rtsfair::action::UiState;
use rtsfair::fairness::{real_camera_filter, virtual_camera_filter};
use rtsfair::geom::Point;
use rtsfair::sim::{GameState, Owner, SimConfig, UnitKind};

fn main() {
    let mut state = GameState::new_game(SimConfig::default(), 2).expect("valid config");
    state.spawn(UnitKind::Pylon, Owner::Opponent, Point::new(54.0, 50.0), None);
    state.spawn(UnitKind::Probe, Owner::Own, Point::new(50.0, 30.0), None);
    let camera = UiState::initial(&state).camera;
    println!("camera {:?}", camera.rect());

    let virt = virtual_camera_filter(&state, &camera);
    let real = real_camera_filter(&state, &camera);
    println!("virtual camera: {} entities", virt.entities.len());
    for e in virt.entities.iter().filter(|e| e.display_only || e.position.x > 40.0) {
        println!("  {:?} {:?} at {:?} tag {:?} order {:?}", e.owner, e.kind, e.position, e.tag, e.current_order);
    }
    println!("real camera: {} entities on screen", real.entities.len());
    let own: u32 = real.minimap.own.iter().sum();
    let foe: u32 = real.minimap.opponent.iter().sum();
    println!("minimap still counts {own} own and {foe} opponent units");
}
