"""Generate the code reference pages, the command reference and the navigation."""

from pathlib import Path

import click
import mkdocs_gen_files

from frechet_certify.cli import frechet

nav = mkdocs_gen_files.Nav()  # type: ignore[attr-defined, no-untyped-call]

root = Path(__file__).parent.parent
src = root / "src"
package = src / "frechet_certify"

for path in sorted(package.rglob("*.py")):
    module_path = path.relative_to(src).with_suffix("")
    doc_path = path.relative_to(src).with_suffix(".md")
    full_doc_path = Path("reference", doc_path)

    parts = tuple(module_path.parts)
    if parts[-1] == "__init__":
        parts = parts[:-1]
        doc_path = doc_path.with_name("index.md")
        full_doc_path = full_doc_path.with_name("index.md")

    nav[parts] = doc_path.as_posix()
    with mkdocs_gen_files.open(full_doc_path, "w") as fd:
        fd.write(f"::: {'.'.join(parts)}")
    mkdocs_gen_files.set_edit_path(full_doc_path, path.relative_to(root))

# One section per subcommand with its --help text.
nav[("commands",)] = "commands.md"
with mkdocs_gen_files.open("reference/commands.md", "w") as fd:
    fd.write("# Commands\n")
    ctx = click.Context(frechet, info_name="frechet")
    for name in sorted(frechet.list_commands(ctx)):
        command = frechet.get_command(ctx, name)
        if command is None:
            continue
        sub_ctx = click.Context(command, info_name=f"frechet {name}", parent=ctx)
        help_text = command.get_help(sub_ctx)
        fd.write(f"\n## `frechet {name}`\n\n```text\n{help_text}\n```\n")

with mkdocs_gen_files.open("reference/SUMMARY.md", "w") as nav_file:
    nav_file.writelines(nav.build_literate_nav())
