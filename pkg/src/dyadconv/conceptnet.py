"""Concept maps from dialog transcripts: preprocessing, windowed link
construction, intersection, and shared-structure statistics.

Preprocessing order: sentence split, lowercase, punctuation strip, noise
filter (pronouns, prepositions, noise verbs), delete list, generalization
thesaurus.  Link construction draws a directed edge from each concept to
every distinct later concept within ``window_words`` positions and the same
``stop_unit_sentences``-sentence block; edge weights count those forward
co-occurrences.  Direction matters throughout: a link i->j in one speaker's
map and j->i in the other's do not intersect.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

_SENTENCE_SPLIT = re.compile(r"[.?!;]+")
_APOSTROPHES = re.compile(r"[’']")
_NON_WORD = re.compile(r"[^a-z0-9\s]+")


@dataclass(frozen=True)
class Lexicon:
    pronouns: frozenset[str]
    prepositions: frozenset[str]
    noise_verbs: frozenset[str]
    delete_words: frozenset[str]
    thesaurus: tuple[tuple[str, str], ...]
    math_domain: bool = False

    @staticmethod
    def default(math_domain: bool = False) -> "Lexicon":
        """Lexicon shipped with the package (editable data files)."""
        root = resources.files("dyadconv.data")
        return Lexicon(
            pronouns=_read_words(root / "noise_pronouns.txt"),
            prepositions=_read_words(root / "noise_prepositions.txt"),
            noise_verbs=_read_words(root / "noise_verbs.txt"),
            delete_words=_read_words(root / "delete_list.txt"),
            thesaurus=_read_thesaurus(root / "thesaurus.txt"),
            math_domain=math_domain,
        )

    @staticmethod
    def from_paths(
        pronouns: str | Path,
        prepositions: str | Path,
        noise_verbs: str | Path,
        delete_list: str | Path,
        thesaurus: str | Path,
        math_domain: bool = False,
    ) -> "Lexicon":
        return Lexicon(
            pronouns=_read_words(Path(pronouns)),
            prepositions=_read_words(Path(prepositions)),
            noise_verbs=_read_words(Path(noise_verbs)),
            delete_words=_read_words(Path(delete_list)),
            thesaurus=_read_thesaurus(Path(thesaurus)),
            math_domain=math_domain,
        )

    @property
    def noise_words(self) -> frozenset[str]:
        return self.pronouns | self.prepositions | self.noise_verbs

    def generalize(self, token: str) -> str:
        """Map a surface form to its concept label.

        Thesaurus patterns are exact matches, or prefix matches when they end
        with ``*``.  In math-domain mode, digit strings become ``number`` and
        unmapped single letters become ``variable``.
        """
        for pattern, label in self.thesaurus:
            if pattern.endswith("*"):
                if token.startswith(pattern[:-1]):
                    return label
            elif token == pattern:
                return label
        if self.math_domain:
            if token.isdigit():
                return "number"
            if len(token) == 1 and token.isalpha():
                return "variable"
        return token


def _read_words(source) -> frozenset[str]:
    lines = source.read_text(encoding="utf-8").splitlines()
    return frozenset(
        w.strip().lower() for w in lines if w.strip() and not w.startswith("#")
    )


def _read_thesaurus(source) -> tuple[tuple[str, str], ...]:
    entries = []
    for line in source.read_text(encoding="utf-8").splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) != 2:
            raise ValueError(f"thesaurus line needs 'pattern label': {line!r}")
        entries.append((parts[0].lower(), parts[1].lower()))
    return tuple(entries)


def preprocess(text: str, lexicon: Lexicon) -> list[list[str]]:
    """Sentences of concept tokens.

    Sentences that contained tokens but lost them all to filtering stay as
    empty lists; raw segments with no tokens at all are dropped.
    """
    sentences: list[list[str]] = []
    for segment in _SENTENCE_SPLIT.split(text):
        cleaned = _APOSTROPHES.sub("", segment.lower())
        cleaned = _NON_WORD.sub(" ", cleaned)
        raw_tokens = cleaned.split()
        if not raw_tokens:
            continue
        kept = [
            lexicon.generalize(t)
            for t in raw_tokens
            if t not in lexicon.noise_words and t not in lexicon.delete_words
        ]
        sentences.append(kept)
    return sentences


@dataclass(frozen=True)
class ConceptMap:
    nodes: frozenset[str]
    edges: dict[tuple[str, str], int] = field(default_factory=dict)

    def __post_init__(self):
        for (i, j), w in self.edges.items():
            if i == j:
                raise ValueError(f"self-loop on {i!r}")
            if w < 1:
                raise ValueError(f"edge {i}->{j} weight {w} < 1")
            if i not in self.nodes or j not in self.nodes:
                raise ValueError(f"edge {i}->{j} references missing node")

    @property
    def total_weight(self) -> int:
        return sum(self.edges.values())


def build_map(
    sentences: list[list[str]],
    window_words: int = 10,
    stop_unit_sentences: int = 10,
) -> ConceptMap:
    """Windowed forward-link construction over preprocessed sentences.

    Blocks of ``stop_unit_sentences`` consecutive sentences bound the moving
    window: no link crosses a block boundary.  Positions count concept tokens
    (post-filtering), and from each position every *distinct* later concept
    within ``window_words`` positions receives one increment.
    """
    if window_words < 1:
        raise ValueError("window_words must be >= 1")
    if stop_unit_sentences < 1:
        raise ValueError("stop_unit_sentences must be >= 1")
    nodes: set[str] = set()
    edges: dict[tuple[str, str], int] = {}
    for block_start in range(0, len(sentences), stop_unit_sentences):
        block = sentences[block_start : block_start + stop_unit_sentences]
        tokens = [t for sentence in block for t in sentence]
        nodes.update(tokens)
        for k, source in enumerate(tokens):
            linked: set[str] = set()
            for target in tokens[k + 1 : k + 1 + window_words]:
                if target == source or target in linked:
                    continue
                linked.add(target)
                edges[(source, target)] = edges.get((source, target), 0) + 1
    return ConceptMap(frozenset(nodes), edges)


def build_map_from_text(
    text: str,
    lexicon: Lexicon,
    window_words: int = 10,
    stop_unit_sentences: int = 10,
) -> ConceptMap:
    return build_map(preprocess(text, lexicon), window_words, stop_unit_sentences)


def intersect(map_a: ConceptMap, map_b: ConceptMap) -> ConceptMap:
    """Shared structure: common nodes, and common directed edges credited at
    the minimum of the two weights."""
    nodes = map_a.nodes & map_b.nodes
    edges = {
        edge: min(w, map_b.edges[edge])
        for edge, w in map_a.edges.items()
        if edge in map_b.edges
    }
    return ConceptMap(frozenset(nodes), edges)


@dataclass(frozen=True)
class MapStats:
    shared_concepts: int
    isolated_shared_concepts: int
    non_isolated_shared_concepts: int
    shared_links: int
    distinct_shared_links: int
    mean_betweenness: float


def betweenness(cmap: ConceptMap) -> dict[str, float]:
    """Directed betweenness on the unweighted digraph (Brandes accumulation);
    raw counts, equal shortest paths splitting contribution equally."""
    succ: dict[str, list[str]] = {v: [] for v in cmap.nodes}
    for i, j in cmap.edges:
        succ[i].append(j)
    for v in succ:
        succ[v].sort()
    cb = {v: 0.0 for v in cmap.nodes}
    for s in cmap.nodes:
        stack: list[str] = []
        pred: dict[str, list[str]] = {v: [] for v in cmap.nodes}
        sigma = {v: 0 for v in cmap.nodes}
        dist = {v: -1 for v in cmap.nodes}
        sigma[s] = 1
        dist[s] = 0
        queue = [s]
        head = 0
        while head < len(queue):
            v = queue[head]
            head += 1
            stack.append(v)
            for w in succ[v]:
                if dist[w] < 0:
                    dist[w] = dist[v] + 1
                    queue.append(w)
                if dist[w] == dist[v] + 1:
                    sigma[w] += sigma[v]
                    pred[w].append(v)
        delta = {v: 0.0 for v in cmap.nodes}
        while stack:
            w = stack.pop()
            for v in pred[w]:
                delta[v] += sigma[v] / sigma[w] * (1.0 + delta[w])
            if w != s:
                cb[w] += delta[w]
    return cb


def map_stats(intersection: ConceptMap) -> MapStats:
    """Shared-structure statistics of an intersected map; all zeros for an
    empty intersection."""
    n = len(intersection.nodes)
    if n == 0:
        return MapStats(0, 0, 0, 0, 0, 0.0)
    touched: set[str] = set()
    for i, j in intersection.edges:
        touched.add(i)
        touched.add(j)
    isolated = n - len(touched)
    cb = betweenness(intersection)
    return MapStats(
        shared_concepts=n,
        isolated_shared_concepts=isolated,
        non_isolated_shared_concepts=len(touched),
        shared_links=intersection.total_weight,
        distinct_shared_links=len(intersection.edges),
        mean_betweenness=sum(cb.values()) / n,
    )


def worksheet_overlap(map_speaker: ConceptMap, map_worksheet: ConceptMap) -> MapStats:
    """Shared structure between a speaker's dialog map and a worksheet map
    built through the same pipeline."""
    return map_stats(intersect(map_speaker, map_worksheet))
