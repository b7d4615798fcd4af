# MIT License
#
# Copyright (c) [2023] [son pham, tien nguyen, bach bao]
#
# Permission is hereby granted, free of charge, to any person obtaining a copy
# of this software and associated documentation files (the "Software"), to deal
# in the Software without restriction, including without limitation the rights
# to use, copy, modify, merge, publish, distribute, sublicense, and/or sell
# copies of the Software, and to permit persons to whom the Software is
# furnished to do so, subject to the following conditions:
#
# The above copyright notice and this permission notice shall be included in all
# copies or substantial portions of the Software.
#
# THE SOFTWARE IS PROVIDED "AS IS", WITHOUT WARRANTY OF ANY KIND, EXPRESS OR
# IMPLIED, INCLUDING BUT NOT LIMITED TO THE WARRANTIES OF MERCHANTABILITY,
# FITNESS FOR A PARTICULAR PURPOSE AND NONINFRINGEMENT. IN NO EVENT SHALL THE
# AUTHORS OR COPYRIGHT HOLDERS BE LIABLE FOR ANY CLAIM, DAMAGES OR OTHER
# LIABILITY, WHETHER IN AN ACTION OF CONTRACT, TORT OR OTHERWISE, ARISING FROM,
# OUT OF OR IN CONNECTION WITH THE SOFTWARE OR THE USE OR OTHER DEALINGS IN THE
# SOFTWARE.


""" Contextual Weisfeiler-Lehman relabeling

Neighbourhood labels grow along successor edges::

    lambda_0(n) = joined node labels
    lambda_i(n) = lambda_{i-1}(n) ⊕ sort({lambda_{i-1}(m) : m successor of n})

and every node emits one contextual label ``c ⊕ lambda_i(n)`` per context c at every height.
"""
from typing import Dict, List, Optional, Tuple

from src.constant import Defaults, Separator
from src.graphmodel.graph import ContextualGraph, NodeRecord
from src.utility import stable_hash64

CONCAT = Separator.CONCAT.value
MULTISET = Separator.MULTISET.value
OPEN = Separator.OPEN.value
CLOSE = Separator.CLOSE.value
ESCAPE = Separator.ESCAPE.value

CwlSequence = List[Dict[str, List[str]]]


def escape_label(text: str) -> str:
    """ Escape reserved characters of a raw label or context
    Args:
        text: raw string

    Returns:
        text with a backslash before every separator character
    """
    escaped = text.replace(ESCAPE, ESCAPE + ESCAPE)
    for reserved in (CONCAT, MULTISET, OPEN, CLOSE):
        escaped = escaped.replace(reserved, ESCAPE + reserved)
    return escaped


def node_label(node: NodeRecord) -> str:
    """Single label of a multi-label node: escaped labels joined in sorted order"""
    return MULTISET.join(escape_label(label) for label in node.labels)


def height_prefix(height: int, separate_heights: bool) -> str:
    return f"{height}{Separator.HEIGHT.value}" if separate_heights else ""


class LabelCodec:
    """ Memo of compressed neighbourhood labels

    Hashed labels keep enough structure to rebuild their readable text on demand, so a vocabulary
    can report the same strings the uncompressed relabeling would emit.
    """

    def __init__(self) -> None:
        self._atoms: Dict[str, Tuple[str, bool]] = {}
        self._composites: Dict[str, Tuple[str, Tuple[str, ...]]] = {}
        self._contextual: Dict[str, Tuple[str, str, str]] = {}
        self._texts: Dict[str, str] = {}

    def atom(self, text: str, single: bool) -> str:
        key = stable_hash64(text)
        self._atoms.setdefault(key, (text, single))
        return key

    def extend(self, previous: str, neighbours: Tuple[str, ...]) -> str:
        key = stable_hash64(previous + CONCAT + MULTISET.join(neighbours))
        self._composites.setdefault(key, (previous, neighbours))
        return key

    def contextual(self, prefix: str, context: str, label: str) -> str:
        key = stable_hash64(prefix + context + CONCAT + label)
        self._contextual.setdefault(key, (prefix, context, label))
        return key

    def merge(self, other: "LabelCodec") -> None:
        for mine, theirs in ((self._atoms, other._atoms), (self._composites, other._composites),
                             (self._contextual, other._contextual)):
            for key, value in theirs.items():
                mine.setdefault(key, value)

    def _is_atomic(self, label: str) -> bool:
        return label in self._atoms and self._atoms[label][1]

    def _neighbourhood_text(self, label: str) -> str:
        text = self._texts.get(label)
        if text is not None:
            return text
        if label in self._atoms:
            text = self._atoms[label][0]
        else:
            previous, neighbours = self._composites[label]
            parts = sorted(self._neighbourhood_text(item) if self._is_atomic(item)
                           else OPEN + self._neighbourhood_text(item) + CLOSE for item in neighbours)
            text = self._neighbourhood_text(previous) + CONCAT + MULTISET.join(parts)
        self._texts[label] = text
        return text

    def readable(self, key: str) -> str:
        """ Readable text of a compressed contextual label
        Raises:
            KeyError: raise if the key was never produced through this codec
        """
        prefix, context, label = self._contextual[key]
        return prefix + context + CONCAT + self._neighbourhood_text(label)


def neighbourhood_sequence(g: ContextualGraph, h: int, codec: Optional[LabelCodec] = None) -> List[List[str]]:
    """ Neighbourhood labels of every node for heights 0..h
    Args:
        g: graph
        h: number of iterations
        codec: hash labels through this codec; readable strings when None

    Returns:
        one list per height, indexed by the dense node index of g

    Notes:
        * A node without successors keeps its label unchanged at every height
        * Readable mode wraps composite neighbour labels in parentheses so encodings stay injective
    """
    atomic = [len(node.labels) == 1 for node in g.nodes]
    texts = [node_label(node) for node in g.nodes]
    current = [codec.atom(text, single) for text, single in zip(texts, atomic)] if codec is not None else texts
    sequence = [current]
    successors = g.successors
    for _ in range(h):
        following = []
        for index, targets in enumerate(successors):
            if not targets:
                following.append(current[index])
            elif codec is not None:
                following.append(codec.extend(current[index], tuple(sorted(current[m] for m in targets))))
            else:
                neighbours = sorted(current[m] if atomic[m] else OPEN + current[m] + CLOSE for m in targets)
                following.append(current[index] + CONCAT + MULTISET.join(neighbours))
        atomic = [flag and not targets for flag, targets in zip(atomic, successors)]
        current = following
        sequence.append(current)
    return sequence


def node_contexts(node: NodeRecord, use_contexts: bool = True) -> List[str]:
    if not use_contexts:
        return [Defaults.NEUTRAL_CONTEXT.value]
    return [escape_label(context) for context in node.sorted_contexts]


def contextual_relabel(g: ContextualGraph, h: int, compress: bool = False, use_contexts: bool = True,
                       separate_heights: bool = False, codec: Optional[LabelCodec] = None) -> CwlSequence:
    """ CWL sequence of a graph up to height h
    Args:
        g: graph
        h: number of relabeling iterations
        compress: emit 64-bit hashed labels instead of readable strings
        use_contexts: prefix with node contexts, otherwise with the neutral context
        separate_heights: prefix every label with its height
        codec: receives the compressed label structure when compress is set

    Returns:
        per height, node id -> contextual labels (one per context, sorted by context)
    """
    if compress and codec is None:
        codec = LabelCodec()
    sequence = neighbourhood_sequence(g, h, codec if compress else None)
    contexts = [node_contexts(node, use_contexts) for node in g.nodes]
    result: CwlSequence = []
    for height, labels in enumerate(sequence):
        prefix = height_prefix(height, separate_heights)
        per_node = {}
        for node, label, node_ctx in zip(g.nodes, labels, contexts):
            if compress:
                per_node[node.id] = [codec.contextual(prefix, context, label) for context in node_ctx]
            else:
                per_node[node.id] = [prefix + context + CONCAT + label for context in node_ctx]
        result.append(per_node)
    return result
