"""
命令行入口

提供 scene-memory 命令行工具。
"""

import dataclasses
import io
import json
import sys
from functools import wraps
from pathlib import Path

import click
from rich.console import Console
from rich.panel import Panel
from rich.table import Table

from . import __version__
from .config import SceneMemoryConfig, load_config
from .demonstration import DemonstrationLog, LogMode, PositionFrame, ingest_positions, read_log, write_log
from .errors import MemoryFormatError, ReplayAborted, SceneMemoryError
from .exporter import export_graph, load_memory, save_memory, write_output
from .graph import MemoryGraph
from .log import setup_logging
from .memory import MemoryManager
from .replay import RunReport, replay

console = Console()

MODE_CHOICE = click.Choice([m.value for m in LogMode])


def handle_errors(func):
    """SceneMemoryError -> 红色错误信息 + 对应退出码"""

    @wraps(func)
    def wrapper(*args, **kwargs):
        try:
            return func(*args, **kwargs)
        except SceneMemoryError as e:
            console.print(f"[red]Error:[/red] {e}")
            sys.exit(e.exit_code)

    return wrapper


def load_memory_file(path: str | None) -> MemoryGraph:
    """读取记忆文件，None 表示空记忆"""
    if path is None:
        return MemoryGraph.empty()
    try:
        data = Path(path).read_bytes()
    except OSError as e:
        raise MemoryFormatError(f"cannot read memory {path}: {e}") from e
    return load_memory(data)


def print_memory(memory: MemoryGraph, title: str = "Memory"):
    """以表格显示记忆中的类别"""
    table = Table(title=title, show_header=True, header_style="bold magenta")
    table.add_column("Category", style="cyan")
    table.add_column("Score", justify="right")
    table.add_column("Parents (weight 1)")
    table.add_column("Restrictions")

    for cat in memory.non_root():
        table.add_row(
            cat.id,
            f"{cat.score:.3f}",
            ", ".join(memory.parents(cat.id)),
            cat.describe(),
        )

    console.print(table)


def print_report(report: RunReport):
    """显示回放摘要"""
    stats = report.stats()

    table = Table(show_header=False)
    table.add_column("Metric", style="cyan")
    table.add_column("Value", style="green", justify="right")
    table.add_row("Scenes", str(stats["scenes"]))
    table.add_row("Stored", str(stats["stored"]))
    table.add_row("Errors", str(stats["errors"]))
    table.add_row("Learned", str(stats["learned"]))
    table.add_row("Forgotten", str(stats["forgotten"]))
    table.add_row("Consolidations", str(stats["consolidations"]))
    table.add_row("Final Categories", str(stats["final_categories"]))
    table.add_row("Max Categories", str(stats["max_categories"]))
    table.add_row("Similarity > 1", f"{stats['similarity_above_one']} (max {stats['max_similarity']:.3f})")
    table.add_row("Latency", f"{stats['latency_mean'] * 1000:.2f} ms avg, {stats['latency_max'] * 1000:.2f} ms max")

    console.print(Panel("[bold]Replay Summary[/bold]", border_style="blue"))
    console.print(table)

    if report.final_chain:
        chain = ", ".join(f"{c} → {p}" for c, p in report.final_chain)
        console.print(f"\n[bold]Weight-1 Chain:[/bold] {chain}")


@click.group()
@click.version_option(version=__version__)
@click.option("--verbose", "-v", is_flag=True, help="输出调试日志")
def main(verbose: bool):
    """Scene Memory - 模糊场景记忆工具"""
    setup_logging(verbose)


@main.command("replay")
@click.option("--log", "log_path", required=True, type=click.Path(exists=True), help="演示日志 (JSON 行)")
@click.option("--mode", "-m", type=MODE_CHOICE, default="facts", help="日志类型")
@click.option("--config", "-c", "config_path", type=click.Path(exists=True), help="配置文件")
@click.option("--memory", "memory_path", type=click.Path(exists=True), help="初始记忆文件")
@click.option("--out", "-o", type=click.Path(), help="输出记忆文件")
@click.option("--report", "report_path", type=click.Path(), help="输出 JSON 报告")
@click.option("--json", "as_json", is_flag=True, help="在标准输出打印 JSON 报告")
@click.option("--continue-on-error", is_flag=True, help="跳过出错的场景并继续")
@handle_errors
def replay_cmd(
    log_path: str,
    mode: str,
    config_path: str | None,
    memory_path: str | None,
    out: str | None,
    report_path: str | None,
    as_json: bool,
    continue_on_error: bool,
):
    """按顺序回放演示日志并定期巩固记忆"""
    config = load_config(config_path)
    log = read_log(log_path, LogMode(mode))
    memory = load_memory_file(memory_path)

    try:
        memory, report = replay(log, config, memory, continue_on_error=continue_on_error)
    except ReplayAborted as e:
        if report_path:
            write_output(_report_json(e.report), report_path)
        raise

    memory.verify()

    if out:
        write_output(save_memory(memory), out)
    if report_path:
        write_output(_report_json(report), report_path)

    if as_json:
        click.echo(_report_json(report).decode("utf-8"), nl=False)
        return

    print_report(report)
    print_memory(memory, title="Final Memory")
    if out:
        console.print(f"\n[green]✓[/green] Memory saved to {out}")


def _report_json(report: RunReport) -> bytes:
    return (json.dumps(report.to_dict(), indent=2, ensure_ascii=False) + "\n").encode("utf-8")


@main.command("classify")
@click.option("--memory", "memory_path", required=True, type=click.Path(exists=True), help="记忆文件")
@click.option("--log", "log_path", required=True, type=click.Path(exists=True), help="待分类的观测 (JSON 行)")
@click.option("--mode", "-m", type=MODE_CHOICE, default="facts", help="日志类型")
@click.option("--config", "-c", "config_path", type=click.Path(exists=True), help="配置文件")
@click.option("--retrieve", is_flag=True, help="执行检索（强化分数）而非只读分类")
@click.option("--retrieve-learns", is_flag=True, help="检索时允许学习新类别")
@click.option("--out", "-o", type=click.Path(), help="检索后保存记忆")
@click.option("--json", "as_json", is_flag=True, help="输出 JSON 格式")
@handle_errors
def classify_cmd(
    memory_path: str,
    log_path: str,
    mode: str,
    config_path: str | None,
    retrieve: bool,
    retrieve_learns: bool,
    out: str | None,
    as_json: bool,
):
    """对观测进行分类，列出分类度与相似度"""
    config = load_config(config_path)
    if retrieve_learns:
        config = dataclasses.replace(
            config, params=dataclasses.replace(config.params, retrieve_learns=True)
        )
    memory = load_memory_file(memory_path)
    log = read_log(log_path, LogMode(mode))
    manager = MemoryManager(config.signature, config.params)

    results = []
    for obs in log.observations(config.signature, config.d_max, config.connection_role):
        if retrieve:
            outcome = manager.retrieve(memory, obs)
            memory = outcome.memory
            classification = outcome.classification
            learned = outcome.learned_category_id
        else:
            classification = memory.classify(manager.encode(obs))
            learned = None

        entry = classification.to_dict()
        entry["best"] = classification.best()
        entry["learned"] = learned
        results.append(entry)

    if retrieve and out:
        write_output(save_memory(memory), out)

    if as_json:
        click.echo(json.dumps(results, indent=2, ensure_ascii=False))
        return

    for entry in results:
        table = Table(title=f"Scene {entry['scene_id']}", show_header=True, header_style="bold")
        table.add_column("Category", style="cyan")
        table.add_column("Degree", justify="right")
        table.add_column("Similarity", justify="right")

        for cid, values in entry["entries"].items():
            marker = " [green]★[/green]" if cid == entry["best"] else ""
            table.add_row(cid + marker, f"{values['degree']:.3f}", f"{values['similarity']:.3f}")

        if entry["classified"]:
            console.print(table)
        else:
            console.print(f"[yellow]Scene {entry['scene_id']}: not classified[/yellow]")
        if entry["learned"]:
            console.print(f"[green]Learned {entry['learned']}[/green]")

    if retrieve and out:
        console.print(f"\n[green]✓[/green] Memory saved to {out}")


@main.command("export")
@click.option("--memory", "memory_path", required=True, type=click.Path(exists=True), help="记忆文件")
@click.option("--format", "-f", "fmt", type=click.Choice(["dot", "json"]), default="dot", help="输出格式")
@click.option("--out", "-o", type=click.Path(), help="输出文件（缺省为标准输出）")
@click.option("--no-reduce", is_flag=True, help="DOT 中保留全部权重为 1 的边")
@handle_errors
def export_cmd(memory_path: str, fmt: str, out: str | None, no_reduce: bool):
    """导出记忆图为 DOT 或 JSON"""
    memory = load_memory_file(memory_path)
    content = export_graph(memory, fmt, reduce=not no_reduce)

    if out:
        write_output(content, out)
        console.print(f"[green]✓[/green] Exported {len(memory) - 1} categories to {out}")
    else:
        click.echo(content.decode("utf-8"), nl=False)


@main.command("ingest")
@click.option("--log", "log_path", required=True, type=click.Path(exists=True), help="位置帧日志 (JSON 行)")
@click.option("--config", "-c", "config_path", type=click.Path(exists=True), help="配置文件")
@click.option("--out", "-o", type=click.Path(), help="输出观测日志（缺省为标准输出）")
@handle_errors
def ingest_cmd(log_path: str, config_path: str | None, out: str | None):
    """将物体位置转换为模糊连接事实"""
    config: SceneMemoryConfig = load_config(config_path)
    frames = read_log(log_path, LogMode.POSITIONS)

    facts = DemonstrationLog(
        records=[
            ingest_positions(frame, config.d_max, config.signature, config.connection_role)
            for frame in frames
            if isinstance(frame, PositionFrame)
        ],
        mode=LogMode.FACTS,
    )

    buffer = io.StringIO()
    write_log(facts, buffer)

    if out:
        write_output(buffer.getvalue().encode("utf-8"), out)
        console.print(f"[green]✓[/green] Wrote {len(facts)} observations to {out}")
    else:
        click.echo(buffer.getvalue(), nl=False)


if __name__ == "__main__":
    main()
