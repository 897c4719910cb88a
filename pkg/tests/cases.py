"""Hand-traced inputs shared by unit and acceptance tests."""

# (edges, location, expected unexplored exits as (subject, relation, object))
EXIT_CASES = [
    ([("kitchen", "has exit", "east"), ("kitchen", "has exit", "south"), ("hall", "is east of", "kitchen")],
     "kitchen", [("kitchen", "has exit", "south")]),
    ([("kitchen", "is in", "house")], "kitchen", []),
    ([("kitchen", "has exit", "east"), ("hall", "is west of", "kitchen")],
     "kitchen", [("kitchen", "has exit", "east")]),
    ([("a", "has exit", "north"), ("a", "has exit", "south"), ("a", "has exit", "east"), ("a", "has exit", "west")],
     "a", [("a", "has exit", "north"), ("a", "has exit", "south"), ("a", "has exit", "east"),
           ("a", "has exit", "west")]),
    ([("a", "has exit", "north"), ("a", "has exit", "south"), ("a", "has exit", "east"), ("a", "has exit", "west"),
      ("n", "is north of", "a"), ("s", "is south of", "a"), ("e", "is east of", "a"), ("w", "is west of", "a")],
     "a", []),
    ([("a", "has exit", "north"), ("a", "has exit", "west"), ("w", "is west of", "a")],
     "a", [("a", "has exit", "north")]),
    ([("a", "has exit", "south"), ("n", "is north of", "a"), ("x", "is south of", "b")],
     "a", [("a", "has exit", "south")]),
    ([("a", "has exit", "east"), ("b", "has exit", "west"), ("b", "is east of", "a")],
     "b", [("b", "has exit", "west")]),
    ([("a", "has exit", "north"), ("a", "has exit", "east")], "nowhere", []),
    ([("a", "has exit", "north"), ("a", "has exit", "south"), ("a", "contains", "locker"),
      ("s", "is south of", "a"), ("a", "is north of", "s")],
     "a", [("a", "has exit", "north")]),
]
