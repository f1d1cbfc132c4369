"""
Set-cover instances.
"""

from typing import Tuple

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator


class SetCoverInstance(BaseModel):
    """Ground set {0..ground_size-1} and a family of subsets."""
    model_config = ConfigDict(frozen=True)

    ground_size: int = Field(ge=0)
    sets: Tuple[Tuple[int, ...], ...] = ()

    @field_validator("sets", mode="before")
    @classmethod
    def _canonical_sets(cls, value):
        return tuple(tuple(sorted(set(s))) for s in value)

    @model_validator(mode="after")
    def _check_elements(self):
        for index, members in enumerate(self.sets):
            for element in members:
                if element < 0 or element >= self.ground_size:
                    raise ValueError(f"set {index} contains element {element} outside the ground set")
        return self

    @property
    def is_feasible(self) -> bool:
        """Whether the union of all sets covers the ground set."""
        covered = set()
        for members in self.sets:
            covered.update(members)
        return len(covered) == self.ground_size

    def set_masks(self) -> Tuple[int, ...]:
        masks = []
        for members in self.sets:
            mask = 0
            for element in members:
                mask |= 1 << element
            masks.append(mask)
        return tuple(masks)

    def covers(self, chosen) -> bool:
        masks = self.set_masks()
        covered = 0
        for index in chosen:
            covered |= masks[index]
        return covered == (1 << self.ground_size) - 1
