import contextvars
import logging
import os
import runpy
from collections.abc import MutableMapping
from concurrent.futures import Executor
from contextlib import contextmanager
from typing import Any, Callable, Dict, Iterable, Iterator, List, Optional

CONFIG_PATH = os.path.join(os.path.dirname(os.path.abspath(__file__)), '..', 'config.py')


def load_config(path: str = CONFIG_PATH) -> Dict[str, Any]:
    """Загрузка настроек из python-файла: берутся только ключи в верхнем регистре."""
    namespace = runpy.run_path(path)
    return {key: value for key, value in namespace.items() if key.isupper()}


# Переопределения текущего запуска; у каждого потока свой контекст
_SCOPE: contextvars.ContextVar[Dict[str, Any]] = contextvars.ContextVar('settings_scope', default={})


class Settings(MutableMapping):
    """Настройки из config.py с переопределениями, видимыми только внутри settings_scope()."""

    def __init__(self, base: Dict[str, Any]):
        self._base = base

    def __getitem__(self, key: str) -> Any:
        scope = _SCOPE.get()
        if key in scope:
            return scope[key]
        return self._base[key]

    def __setitem__(self, key: str, value: Any) -> None:
        self._base[key] = value

    def __delitem__(self, key: str) -> None:
        del self._base[key]

    def __iter__(self) -> Iterator[str]:
        return iter(self._base)

    def __len__(self) -> int:
        return len(self._base)


DEFAULTS = Settings(load_config())


def setup_logging(log_file: Optional[str] = None, level: int = logging.INFO) -> None:
    handlers = [logging.StreamHandler()]  # лог в консоль
    if log_file:
        handlers.insert(0, logging.FileHandler(log_file, encoding='utf-8'))  # лог в файл
    logging.basicConfig(
        level=level,
        format='%(asctime)s [%(levelname)s] %(message)s',
        handlers=handlers,
        force=True,
    )


def create_app(overrides: Optional[Dict[str, Any]] = None) -> Dict[str, Any]:
    """Проверка переопределений и подготовка папки отчётов.

    Возвращает итоговые настройки запуска; сам DEFAULTS не меняется,
    переопределения действуют только внутри settings_scope().
    """
    # Загрузка конфигурации
    overrides = dict(overrides or {})
    unknown = set(overrides) - set(DEFAULTS)
    if unknown:
        raise KeyError(f"Неизвестные настройки: {', '.join(sorted(unknown))}")
    settings = {**{key: DEFAULTS[key] for key in DEFAULTS}, **overrides}

    # Создание папки для отчётов
    os.makedirs(settings['OUTPUT_FOLDER'], exist_ok=True)
    return settings


@contextmanager
def settings_scope(overrides: Optional[Dict[str, Any]] = None) -> Iterator[Dict[str, Any]]:
    """Переопределения настроек для одного запуска и потоков, запущенных через map_in_scope()."""
    settings = create_app(overrides)
    token = _SCOPE.set({**_SCOPE.get(), **(overrides or {})})
    try:
        yield settings
    finally:
        _SCOPE.reset(token)


def map_in_scope(pool: Executor, func: Callable, items: Iterable) -> List[Any]:
    """pool.map, при котором каждая задача видит настройки вызывающего запуска."""
    futures = [pool.submit(contextvars.copy_context().run, func, item) for item in items]
    return [future.result() for future in futures]
