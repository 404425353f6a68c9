import os

from jinja2 import Environment, FileSystemLoader, StrictUndefined


def load_template(template_path: str, **kwargs) -> str:
    """
    Load a Jinja2 template file and render it with provided kwargs.

    Args:
        template_path: Path to the .j2 template file
        **kwargs: Arbitrary keyword arguments to pass to the template

    Returns:
        Rendered template content as string
    """
    template_dir = os.path.dirname(template_path)
    template_name = os.path.basename(template_path)

    env = Environment(loader=FileSystemLoader(template_dir), undefined=StrictUndefined,
                      trim_blocks=True, lstrip_blocks=True, keep_trailing_newline=True)
    template = env.get_template(template_name)

    return template.render(**kwargs)


def write_output(path: str, content: str) -> str:
    """Write an output file, creating its directory; returns the path."""
    dir_path = os.path.dirname(path)
    if dir_path and not os.path.exists(dir_path):
        os.makedirs(dir_path, exist_ok=True)
    with open(path, "w", encoding="utf-8") as f:
        f.write(content)
    return path
