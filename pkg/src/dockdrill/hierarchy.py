"""Contact interfaces and the five-level ensemble hierarchy.

Levels: the complex ensemble holds complex configurations (CC); each CC
splits into protein pair configurations (PPC) holding amino-acid pair (AAP)
contacts between amino acids (AA); grouping PPCs of the same protein pair
across the ensemble gives protein pair ensembles (PPE).

Two residues from different proteins are in contact when the minimum
heavy-atom distance between them is <= the cutoff. Building the hierarchy
for n configurations of m proteins scans all m*(m-1)/2 protein pairs per
configuration, i.e. O(m^2 * n) pair scans.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Mapping

import numpy as np
from scipy.spatial import cKDTree

from .constants import charge_class, hydrophobicity
from .errors import InputError, UnknownEntityError
from .ingest import ProteinTemplate, RawConfiguration, RawEnsemble, ReferenceStructure

__all__ = [
    "AAId",
    "AAPKey",
    "AminoAcid",
    "AminoAcidPairInstance",
    "ProteinPairConfiguration",
    "ProteinPairEnsemble",
    "ComplexConfiguration",
    "ComplexEnsemble",
    "Reference",
    "pair_key",
    "aap_key",
    "detect_contacts",
    "build_hierarchy",
]

# An amino acid is identified by (protein name, residue sequence number);
# an amino-acid pair key is two of those, ordered by protein name, which
# makes keys unique and comparable ensemble-wide.
AAId = tuple[str, int]
AAPKey = tuple[AAId, AAId]
PairKey = tuple[str, str]

DEFAULT_CUTOFF = 5.0


def pair_key(p: str, q: str) -> PairKey:
    """Canonical unordered protein pair (protein-name order)."""
    if p == q:
        raise InputError(f"protein pair must join two different proteins, got {p!r}")
    return (p, q) if p < q else (q, p)


def aap_key(aa_1: AAId, aa_2: AAId) -> AAPKey:
    if aa_1[0] == aa_2[0]:
        raise InputError("amino-acid pair must span two proteins")
    return (aa_1, aa_2) if aa_1[0] < aa_2[0] else (aa_2, aa_1)


@dataclass(frozen=True)
class AminoAcid:
    protein: str
    residue_seq: int
    residue_name: str
    hydrophobicity: float
    charge: str

    @property
    def id(self) -> AAId:
        return (self.protein, self.residue_seq)


@dataclass(frozen=True)
class AminoAcidPairInstance:
    key: AAPKey
    cc_id: str
    min_distance: float


@dataclass(eq=False)
class ProteinPairConfiguration:
    """The contact interface of one protein pair inside one configuration.
    Exists only when at least one contact exists."""

    cc_id: str
    pair: PairKey
    aap_keys: frozenset[AAPKey]
    min_distances: dict[AAPKey, float]
    scores: dict[str, float] = field(default_factory=dict)

    @property
    def id(self) -> tuple[PairKey, str]:
        return (self.pair, self.cc_id)

    @property
    def instances(self) -> list[AminoAcidPairInstance]:
        return [
            AminoAcidPairInstance(key, self.cc_id, d)
            for key, d in sorted(self.min_distances.items())
        ]


@dataclass(eq=False)
class ProteinPairEnsemble:
    pair: PairKey
    ppcs: dict[str, ProteinPairConfiguration]  # by cc id

    @property
    def cc_ids(self) -> frozenset[str]:
        return frozenset(self.ppcs)


@dataclass(eq=False)
class ComplexConfiguration:
    id: str
    coords: dict[str, np.ndarray]
    properties: dict[str, float]
    ppcs: dict[PairKey, ProteinPairConfiguration]

    @property
    def aap_keys(self) -> frozenset[AAPKey]:
        keys: set[AAPKey] = set()
        for ppc in self.ppcs.values():
            keys |= ppc.aap_keys
        return frozenset(keys)


def _heavy_arrays(template: ProteinTemplate, coords: np.ndarray):
    if template.all_heavy:
        return coords, template.atom_residue_index
    mask = template.heavy_mask
    return coords[mask], template.atom_residue_index[mask]


def detect_contacts(
    proteins: Mapping[str, ProteinTemplate],
    configuration: RawConfiguration | ComplexConfiguration,
    cutoff: float = DEFAULT_CUTOFF,
) -> list[ProteinPairConfiguration]:
    """Find all residue contacts of one configuration, grouped per protein
    pair. A pair with no contact yields no entry (an empty result is a valid
    configuration where no proteins touch).

    KD-trees only propose candidate atom pairs; distances are recomputed
    with numpy and thresholded `d <= cutoff`, so results match an exhaustive
    all-pairs scan exactly.
    """
    if cutoff <= 0:
        raise InputError(f"contact cutoff must be positive, got {cutoff}")

    names = sorted(configuration.coords)
    heavy = {name: _heavy_arrays(proteins[name], configuration.coords[name]) for name in names}
    trees = {
        name: cKDTree(xyz, balanced_tree=False, compact_nodes=False)
        for name, (xyz, _) in heavy.items()
        if len(xyz) > 0
    }
    out: list[ProteinPairConfiguration] = []
    query_r = cutoff * (1.0 + 1e-9)

    for p, q in combinations(names, 2):
        if p not in trees or q not in trees:
            continue
        xyz_p, res_p = heavy[p]
        xyz_q, res_q = heavy[q]
        candidates = trees[p].sparse_distance_matrix(
            trees[q], max_distance=query_r, output_type="ndarray"
        )
        if len(candidates) == 0:
            continue
        i_idx = candidates["i"]
        j_idx = candidates["j"]
        dist = np.linalg.norm(xyz_p[i_idx] - xyz_q[j_idx], axis=1)
        keep = dist <= cutoff
        if not keep.any():
            continue
        i_idx, j_idx, dist = i_idx[keep], j_idx[keep], dist[keep]

        n_res_p = proteins[p].n_residues
        n_res_q = proteins[q].n_residues
        rmin = np.full((n_res_p, n_res_q), np.inf)
        np.minimum.at(rmin, (res_p[i_idx], res_q[j_idx]), dist)

        seqs_p = proteins[p].residue_seqs
        seqs_q = proteins[q].residue_seqs
        min_distances: dict[AAPKey, float] = {}
        for ri, rj in zip(*np.nonzero(np.isfinite(rmin))):
            key = ((p, seqs_p[ri]), (q, seqs_q[rj]))  # p < q by construction
            min_distances[key] = float(rmin[ri, rj])
        out.append(
            ProteinPairConfiguration(
                cc_id=configuration.id,
                pair=(p, q),
                aap_keys=frozenset(min_distances),
                min_distances=min_distances,
            )
        )
    return out


@dataclass(eq=False)
class Reference:
    """Contact interfaces of an externally loaded configuration, comparable
    against ensemble configurations through shared pair/AAP keys."""

    proteins: frozenset[str]
    ppc_keys: dict[PairKey, frozenset[AAPKey]]
    coords: dict[str, np.ndarray]


class ComplexEnsemble:
    """The fully indexed hierarchy. Immutable after construction; all view
    aggregates are pure functions of (ensemble, visible cc-id set)."""

    def __init__(
        self,
        proteins: dict[str, ProteinTemplate],
        configurations: list[ComplexConfiguration],
        cutoff: float,
    ):
        self.proteins = proteins
        self.configurations: dict[str, ComplexConfiguration] = {
            cc.id: cc for cc in configurations
        }
        self.cutoff = cutoff
        self.cc_order: dict[str, int] = {cc.id: i for i, cc in enumerate(configurations)}
        self.all_cc_ids: frozenset[str] = frozenset(self.cc_order)

        ppes: dict[PairKey, ProteinPairEnsemble] = {}
        aap_ccs: dict[AAPKey, set[str]] = {}
        cc_aaps: dict[str, frozenset[AAPKey]] = {}
        aa_ccs: dict[AAId, set[str]] = {}
        for cc in configurations:
            keys: set[AAPKey] = set()
            for pair, ppc in cc.ppcs.items():
                ppes.setdefault(pair, ProteinPairEnsemble(pair, {})).ppcs[cc.id] = ppc
                keys |= ppc.aap_keys
            cc_aaps[cc.id] = frozenset(keys)
            for key in keys:
                aap_ccs.setdefault(key, set()).add(cc.id)
                aa_ccs.setdefault(key[0], set()).add(cc.id)
                aa_ccs.setdefault(key[1], set()).add(cc.id)

        self.ppes = ppes
        self.aap_ccs: dict[AAPKey, frozenset[str]] = {
            k: frozenset(v) for k, v in aap_ccs.items()
        }
        self.cc_aaps = cc_aaps
        self.aa_ccs: dict[AAId, frozenset[str]] = {
            k: frozenset(v) for k, v in aa_ccs.items()
        }
        self.pair_ccs: dict[PairKey, frozenset[str]] = {
            pair: ppe.cc_ids for pair, ppe in ppes.items()
        }
        self._aa_cache: dict[AAId, AminoAcid] = {}

    # -- lookups ---------------------------------------------------------

    def configuration(self, cc_id: str) -> ComplexConfiguration:
        try:
            return self.configurations[cc_id]
        except KeyError:
            raise UnknownEntityError(f"unknown configuration {cc_id!r}") from None

    def protein(self, name: str) -> ProteinTemplate:
        try:
            return self.proteins[name]
        except KeyError:
            raise UnknownEntityError(f"unknown protein {name!r}") from None

    def ppe(self, p: str, q: str) -> ProteinPairEnsemble:
        self.protein(p), self.protein(q)
        key = pair_key(p, q)
        if key not in self.ppes:
            raise UnknownEntityError(f"proteins {key[0]} and {key[1]} never contact")
        return self.ppes[key]

    def amino_acid(self, aa_id: AAId) -> AminoAcid:
        cached = self._aa_cache.get(aa_id)
        if cached is not None:
            return cached
        protein, seq = aa_id
        template = self.protein(protein)
        try:
            idx = template.residue_seqs.index(seq)
        except ValueError:
            raise UnknownEntityError(f"protein {protein} has no residue {seq}") from None
        name = template.residue_names[idx]
        aa = AminoAcid(protein, seq, name, hydrophobicity(name), charge_class(name))
        self._aa_cache[aa_id] = aa
        return aa

    @property
    def property_names(self) -> tuple[str, ...]:
        names: dict[str, None] = {}
        for cc in self.configurations.values():
            for key in cc.properties:
                names.setdefault(key)
        return tuple(names)

    def sorted_cc_ids(self, ids: Iterable[str]) -> list[str]:
        return sorted(ids, key=self.cc_order.__getitem__)

    # -- references ------------------------------------------------------

    def make_reference(self, structure: ReferenceStructure) -> Reference:
        """Compute the reference's contact interfaces at the ensemble cutoff."""
        unknown = set(structure.proteins) - set(self.proteins)
        if unknown:
            raise UnknownEntityError(
                f"reference proteins not in ensemble: {sorted(unknown)}"
            )
        raw = RawConfiguration(id="__reference__", coords=structure.coords)
        ppcs = detect_contacts(structure.proteins, raw, self.cutoff)
        return Reference(
            proteins=frozenset(structure.proteins),
            ppc_keys={ppc.pair: ppc.aap_keys for ppc in ppcs},
            coords=structure.coords,
        )


def build_hierarchy(
    raw: RawEnsemble, cutoff: float = DEFAULT_CUTOFF, threads: int = 1
) -> ComplexEnsemble:
    """Materialize the full hierarchy with the global AAP index.

    Contact detection runs independently per configuration and may be
    spread over worker threads; the returned ensemble is immutable and safe
    to share.
    """
    def contacts(cc: RawConfiguration):
        return detect_contacts(raw.proteins, cc, cutoff)

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            all_ppcs = list(pool.map(contacts, raw.configurations))
    else:
        all_ppcs = [contacts(cc) for cc in raw.configurations]

    configurations = [
        ComplexConfiguration(
            id=cc.id,
            coords=cc.coords,
            properties=dict(cc.properties),
            ppcs={ppc.pair: ppc for ppc in ppcs},
        )
        for cc, ppcs in zip(raw.configurations, all_ppcs)
    ]
    return ComplexEnsemble(dict(raw.proteins), configurations, cutoff)
