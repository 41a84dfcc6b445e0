use serde::{Deserialize, Serialize};

use crate::action::ActionError;
use crate::geom::{Point, Rect};

pub const CAMERA_WIDTH: f64 = 32.0;
pub const CAMERA_HEIGHT: f64 = 20.0;

/// Fixed 32x20 game-unit window over the map, always clamped inside the map bounds.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Camera {
    center: Point,
    map_w: f64,
    map_h: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ScrollDir {
    Left,
    Right,
    Up,
    Down,
}

impl ScrollDir {
    pub const ALL: [ScrollDir; 4] = [ScrollDir::Left, ScrollDir::Right, ScrollDir::Up, ScrollDir::Down];

    pub fn unit(self) -> (f64, f64) {
        match self {
            ScrollDir::Left => (-1.0, 0.0),
            ScrollDir::Right => (1.0, 0.0),
            ScrollDir::Up => (0.0, -1.0),
            ScrollDir::Down => (0.0, 1.0),
        }
    }
}

/// Direction of a coordinate transform between screen pixels and map units.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    ScreenToWorld,
    WorldToScreen,
}

/// Screen and minimap resolution plus camera motion parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Display {
    pub screen_w: f64,
    pub screen_h: f64,
    pub minimap_w: f64,
    pub minimap_h: f64,
    /// Game units per game-second for edge scrolling.
    pub scroll_speed: f64,
}

impl Default for Display {
    fn default() -> Self {
        Self {
            screen_w: 256.0,
            screen_h: 160.0,
            minimap_w: 64.0,
            minimap_h: 64.0,
            scroll_speed: 12.0,
        }
    }
}

impl Camera {
    pub fn new(center: Point, map_w: f64, map_h: f64) -> Self {
        Self {
            center: clamp_center(center, map_w, map_h),
            map_w,
            map_h,
        }
    }

    pub fn center(&self) -> Point {
        self.center
    }

    pub fn width(&self) -> f64 {
        CAMERA_WIDTH
    }

    pub fn height(&self) -> f64 {
        CAMERA_HEIGHT
    }

    pub fn map_size(&self) -> (f64, f64) {
        (self.map_w, self.map_h)
    }

    pub fn rect(&self) -> Rect {
        Rect::centered(self.center, CAMERA_WIDTH, CAMERA_HEIGHT)
    }

    pub fn recentered(&self, center: Point) -> Self {
        Self::new(center, self.map_w, self.map_h)
    }
}

/// Keeps the camera rectangle inside the map. A map narrower than the camera pins the
/// center to the map's midline on that axis.
fn clamp_center(c: Point, map_w: f64, map_h: f64) -> Point {
    let axis = |v: f64, half: f64, extent: f64| {
        if extent <= 2.0 * half {
            extent / 2.0
        } else {
            v.clamp(half, extent - half)
        }
    };
    Point::new(
        axis(c.x, CAMERA_WIDTH / 2.0, map_w),
        axis(c.y, CAMERA_HEIGHT / 2.0, map_h),
    )
}

/// Affine map between the camera rectangle and the screen.
pub fn screen_world_transform(
    camera: &Camera,
    display: &Display,
    p: Point,
    direction: Direction,
) -> Result<Point, ActionError> {
    let rect = camera.rect();
    let sx = display.screen_w / CAMERA_WIDTH;
    let sy = display.screen_h / CAMERA_HEIGHT;
    match direction {
        Direction::ScreenToWorld => {
            if !(0.0..=display.screen_w).contains(&p.x) || !(0.0..=display.screen_h).contains(&p.y) {
                return Err(ActionError::OutOfScreen);
            }
            Ok(Point::new(rect.min.x + p.x / sx, rect.min.y + p.y / sy))
        }
        Direction::WorldToScreen => {
            if !rect.contains(p) {
                return Err(ActionError::OutOfScreen);
            }
            Ok(Point::new((p.x - rect.min.x) * sx, (p.y - rect.min.y) * sy))
        }
    }
}

pub fn screen_to_world(camera: &Camera, display: &Display, p: Point) -> Result<Point, ActionError> {
    screen_world_transform(camera, display, p, Direction::ScreenToWorld)
}

pub fn world_to_screen(camera: &Camera, display: &Display, p: Point) -> Result<Point, ActionError> {
    screen_world_transform(camera, display, p, Direction::WorldToScreen)
}

pub fn minimap_to_world(camera: &Camera, display: &Display, p: Point) -> Result<Point, ActionError> {
    if !(0.0..=display.minimap_w).contains(&p.x) || !(0.0..=display.minimap_h).contains(&p.y) {
        return Err(ActionError::OutOfScreen);
    }
    let (mw, mh) = camera.map_size();
    Ok(Point::new(p.x * mw / display.minimap_w, p.y * mh / display.minimap_h))
}

/// Clicking the minimap: instant recenter on the world point, then clamp.
pub fn move_camera_click(camera: &Camera, display: &Display, minimap_point: Point) -> Result<Camera, ActionError> {
    Ok(camera.recentered(minimap_to_world(camera, display, minimap_point)?))
}

/// Edge scrolling: translate by `scroll_speed * dt` along the direction, then clamp.
pub fn move_camera_scroll(camera: &Camera, display: &Display, direction: ScrollDir, dt: f64) -> Camera {
    let (ux, uy) = direction.unit();
    let d = display.scroll_speed * dt;
    let c = camera.center();
    camera.recentered(Point::new(c.x + ux * d, c.y + uy * d))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cam(x: f64, y: f64) -> Camera {
        Camera::new(Point::new(x, y), 64.0, 64.0)
    }

    #[test]
    fn screen_center_is_camera_center() {
        let c = cam(30.0, 30.0);
        let d = Display::default();
        let w = screen_to_world(&c, &d, Point::new(128.0, 80.0)).unwrap();
        assert_eq!(w, c.center());
    }

    #[test]
    fn corner_camera_clamps_before_mapping() {
        // Requested center at the map corner; clamp puts the rectangle at [0,32]x[0,20].
        let c = cam(0.0, 0.0);
        assert_eq!(c.center(), Point::new(16.0, 10.0));
        let d = Display::default();
        assert_eq!(screen_to_world(&c, &d, Point::new(0.0, 0.0)).unwrap(), Point::new(0.0, 0.0));
    }

    #[test]
    fn off_screen_point_rejected() {
        let c = cam(30.0, 30.0);
        let d = Display::default();
        assert_eq!(
            screen_to_world(&c, &d, Point::new(-1.0, 5.0)),
            Err(ActionError::OutOfScreen)
        );
        assert_eq!(
            world_to_screen(&c, &d, Point::new(1.0, 1.0)),
            Err(ActionError::OutOfScreen)
        );
    }

    #[test]
    fn click_recenter_and_clamp() {
        let c = cam(16.0, 10.0);
        let d = Display::default();
        let mid = move_camera_click(&c, &d, Point::new(32.0, 32.0)).unwrap();
        assert_eq!(mid.center(), Point::new(32.0, 32.0));
        let corner = move_camera_click(&c, &d, Point::new(64.0, 64.0)).unwrap();
        assert_eq!(corner.center(), Point::new(48.0, 54.0));
        assert!(Rect::centered(Point::new(32.0, 32.0), 64.0, 64.0).contains_rect(&corner.rect()));
    }

    #[test]
    fn scroll_one_second_right() {
        let d = Display::default();
        let mut c = cam(20.0, 30.0);
        // Stepping in 16 sub-steps of 1/16 s matches one 1 s scroll.
        let once = move_camera_scroll(&c, &d, ScrollDir::Right, 1.0);
        for _ in 0..16 {
            c = move_camera_scroll(&c, &d, ScrollDir::Right, 1.0 / 16.0);
        }
        assert_eq!(once.center(), Point::new(32.0, 30.0));
        assert!((c.center().x - 32.0).abs() < 1e-12);
        let clamped = move_camera_scroll(&cam(44.0, 30.0), &d, ScrollDir::Right, 1.0);
        assert_eq!(clamped.center().x, 48.0);
    }

    #[test]
    fn camera_pinned_on_small_map() {
        let c = Camera::new(Point::new(3.0, 50.0), 20.0, 12.0);
        assert_eq!(c.center(), Point::new(10.0, 6.0));
    }
}
