"""Render task instances into the textual prompts sent to models.

Rendering is a byte-level contract: newlines are LF, every prompt ends with
exactly one trailing newline, and fixed-seed renders are pinned by golden
files under ``tests/golden/``.  Change anything here and the goldens must be
regenerated deliberately.

Layout (both families): sections separated by single blank lines.  Astro
prompts show a markdown-pipe table of the sampled rows, the variable binding,
the swap list, the query line, two lettered options, and ``Reply:``.
Collision prompts show the fixed problem statement and exchange rule, the
initial velocities, the numbered collision list, the question, four lettered
options, and ``Answer:``.  The configured answer instruction is appended as
the final line of either prompt.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from staterecall.taskgen.astro import AstroInstance
from staterecall.taskgen.collision import CollisionInstance
from staterecall.taskgen.instance import Payload, TaskInstance
from staterecall.taskgen.naming import name_index, variable_name
from staterecall.taskgen.seeds import Family

DEFAULT_ANSWER_INSTRUCTION = 'Reply with a JSON object of the form {"answer": "<LETTER>"}.'

_PROBLEM_BLOCK = (
    "Problem:\n"
    "Consider a one-dimensional system in which all particles\n"
    "move along a single line."
)

_KEY_RULE_BLOCK = (
    "Key rule:\n"
    "- When two particles of equal mass collide elastically,\n"
    "they simply exchange velocities.\n"
    "(This means each particle leaves the collision with the\n"
    "other particle's incoming velocity.)"
)


@dataclass(frozen=True)
class PromptTemplateConfig:
    """Per-family rendering knobs.

    ``answer_instruction`` must mention the literal key ``"answer"`` — it is
    the only place the JSON output contract is communicated to the model.
    """

    family: Family
    answer_instruction: str = DEFAULT_ANSWER_INSTRUCTION
    table_style: str = "markdown-pipe"

    def __post_init__(self) -> None:
        if '"answer"' not in self.answer_instruction:
            raise ValueError('answer_instruction must mention the literal key "answer"')
        if self.table_style != "markdown-pipe":
            raise ValueError(f"unsupported table_style: {self.table_style!r}")


@dataclass(frozen=True)
class RenderedPrompt:
    text: str
    char_count: int
    option_letters: tuple[str, ...] = field(default=())

    def __post_init__(self) -> None:
        if self.char_count != len(self.text):
            raise ValueError("char_count disagrees with text length")


def _join_sections(sections: list[str]) -> str:
    return "\n\n".join(sections) + "\n"


def _render_table(instance: AstroInstance) -> str:
    columns = instance.columns
    widths = {
        col: max(len(col), *(len(row.cells[col]) for row in instance.rows)) for col in columns
    }

    def line(cells: list[str]) -> str:
        return "|" + "|".join(f" {cell.ljust(widths[col])} " for col, cell in zip(columns, cells)) + "|"

    out = [line(list(columns))]
    out.append("|" + "|".join("-" * (widths[col] + 2) for col in columns) + "|")
    for row in instance.rows:
        out.append(line([row.cells[col] for col in columns]))
    return "\n".join(out)


def render_astro(instance: AstroInstance, cfg: PromptTemplateConfig) -> RenderedPrompt:
    """Render an Astro Recall instance.

    Binding values are the catalog's original cell text, verbatim — no
    numeric re-formatting, so goldens never drift with float repr changes.
    """
    if cfg.family is not Family.ASTRO:
        raise ValueError("config family must be astro")
    names = [variable_name(i) for i in range(instance.m)]
    values = [instance.rows[instance.binding[name]].cells[instance.target_column] for name in names]
    sections = [
        _render_table(instance),
        f"Consider the following {instance.target_column}:\n"
        + ", ".join(names)
        + " = "
        + ", ".join(values),
        "Consider the following swapping:",
    ]
    if instance.swaps:
        sections.append("\n".join(f"- {op.render()}" for op in instance.swaps))
    sections.append(
        f"The {instance.retrieve_column} with the {instance.target_column} = {instance.query_var} is"
    )
    sections.append("The two candidate answers are:")
    sections.append(f"A) {instance.option_a}\nB) {instance.option_b}")
    sections.append(f"Reply:\n{cfg.answer_instruction}")
    text = _join_sections(sections)
    return RenderedPrompt(text=text, char_count=len(text), option_letters=instance.option_letters)


def render_collision(instance: CollisionInstance, cfg: PromptTemplateConfig) -> RenderedPrompt:
    """Render a Collision Simulator instance.

    With n=0 the collision-order header is kept with an empty list, so the
    prompt shape stays stable across the whole difficulty grid.
    """
    if cfg.family is not Family.COLLISION:
        raise ValueError("config family must be collision")
    # Label order, not lexicographic: past 26 particles "AA" would sort before "B".
    labels = sorted(instance.velocities, key=name_index)
    velocity_lines = "\n".join(f"{label} = {instance.velocities[label]}" for label in labels)
    collisions = "Collisions occur in the following order:"
    if instance.collisions:
        collisions += "\n" + "\n".join(
            f"{i}. {a} collides with {b}" for i, (a, b) in enumerate(instance.collisions, start=1)
        )
    options = "\n".join(
        f"{letter}) {text}" for letter, text in zip(instance.option_letters, instance.option_texts)
    )
    sections = [
        _PROBLEM_BLOCK,
        _KEY_RULE_BLOCK,
        f"Initial velocities:\n{velocity_lines}",
        collisions,
        f"Question:\n- What is the velocity of {instance.query_particle}?",
        f"Options:\n{options}",
        f"Answer:\n{cfg.answer_instruction}",
    ]
    text = _join_sections(sections)
    return RenderedPrompt(text=text, char_count=len(text), option_letters=instance.option_letters)


def render_instance(payload: Payload, cfg: PromptTemplateConfig | None = None) -> RenderedPrompt:
    """Dispatch on payload type; builds a default config when none is given."""
    if isinstance(payload, AstroInstance):
        return render_astro(payload, cfg or PromptTemplateConfig(family=Family.ASTRO))
    return render_collision(payload, cfg or PromptTemplateConfig(family=Family.COLLISION))


def render_task(task: TaskInstance, cfg: PromptTemplateConfig | None = None) -> RenderedPrompt:
    return render_instance(task.payload, cfg)
