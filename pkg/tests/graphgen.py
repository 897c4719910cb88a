"""Seeded random graphs shared by the snapshot and retrieval tests."""

import random

from arigraph.graph import KnowledgeGraph

WORDS = ["room a", "room b", "key", "locker", "apple", "table", "east", "north", "note", "box",
         "kitchen", "inventory", "golden locker", "hall"]
RELATIONS = ["is in", "contains", "has exit", "is east of", "opens", "is on", "mentions"]


def random_graph(seed: int, max_edges: int = 100, odd_text: bool = False) -> KnowledgeGraph:
    rng = random.Random(seed)
    g = KnowledgeGraph()
    words = WORDS + (["Ünïcode thing", "semi;colon", "comma, inside", "tab\tchar"] if odd_text else [])
    target = rng.randint(0, max_edges)
    step = 0
    while len(g.edges) < target:
        batch = [(rng.choice(words), rng.choice(RELATIONS), rng.choice(words)) for _ in range(rng.randint(0, 6))]
        res = g.upsert_triplets(step, batch)
        if g.active_edges() and rng.random() < 0.3:
            old = rng.choice(g.active_edges()).as_triplet()
            g.apply_replacements(step, [(old, (old[0], old[1], rng.choice(words)))])
        if rng.random() < 0.8:
            obs = rng.choice(["You see a key.", "Multi\nline\tobservation ✓", "", "; , ->"])
            g.add_episode(step, obs, rng.choice([None, "go east", ""]), res.edge_ids)
        step += rng.randint(1, 3)
    return g
