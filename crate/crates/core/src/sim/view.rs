use crate::sim::{Entity, GameState, Owner, Tag, UnitKind};

/// One row of the entity view: the policy addresses `index`, the engine uses `tag`.
#[derive(Debug, Clone, PartialEq)]
pub struct ViewRow {
    pub index: usize,
    pub tag: Tag,
    pub kind: UnitKind,
    pub entity: Entity,
}

/// Ordered, truncated entity list: own Nexus first, then own Probes by ascending tag.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct EntityView {
    pub rows: Vec<ViewRow>,
}

impl EntityView {
    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn tag_at(&self, index: usize) -> Option<Tag> {
        self.rows.get(index).map(|r| r.tag)
    }

    pub fn index_of(&self, tag: Tag) -> Option<usize> {
        self.rows.iter().position(|r| r.tag == tag)
    }

    pub fn get(&self, index: usize) -> Option<&ViewRow> {
        self.rows.get(index)
    }
}

pub fn entity_view(state: &GameState) -> EntityView {
    let capacity = state.config.max_entities;
    let nexus = state.own_nexus();
    let mut probes: Vec<&Entity> = state
        .entities
        .iter()
        .filter(|e| e.owner == Owner::Own && e.kind == UnitKind::Probe)
        .collect();
    probes.sort_by_key(|e| e.tag);
    nexus
        .into_iter()
        .chain(probes)
        .take(capacity)
        .enumerate()
        .map(|(index, e)| ViewRow {
            index,
            tag: e.tag,
            kind: e.kind,
            entity: e.clone(),
        })
        .collect::<Vec<_>>()
        .into()
}

impl From<Vec<ViewRow>> for EntityView {
    fn from(rows: Vec<ViewRow>) -> Self {
        Self { rows }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::Point;
    use crate::sim::{Order, SimConfig};

    #[test]
    fn initial_view_leads_with_nexus() {
        let s = GameState::new_game(SimConfig::default(), 7).unwrap();
        let v = entity_view(&s);
        assert_eq!(v.len(), 8);
        assert_eq!(v.get(0).unwrap().kind, UnitKind::Nexus);
        assert_eq!(v, entity_view(&s));
    }

    #[test]
    fn fourteen_probes_keep_smallest_tags() {
        let mut s = GameState::new_game(SimConfig::default(), 7).unwrap();
        for _ in 0..2 {
            s.spawn(UnitKind::Probe, Owner::Own, Point::new(9.0, 9.0), Some(Order::Harvest));
        }
        let mut probe_tags: Vec<_> = s.entities.iter().filter(|e| e.kind == UnitKind::Probe).map(|e| e.tag).collect();
        probe_tags.sort();
        let v = entity_view(&s);
        let shown: Vec<_> = (1..8).map(|i| v.tag_at(i).unwrap()).collect();
        assert_eq!(shown, probe_tags[..7].to_vec());
        assert_eq!(v.index_of(probe_tags[7]), None);
    }

    #[test]
    fn empty_state_gives_empty_view() {
        let s = GameState::empty(SimConfig::default(), 0).unwrap();
        assert!(entity_view(&s).is_empty());
    }
}
