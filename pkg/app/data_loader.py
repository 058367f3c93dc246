import csv
import os
from io import StringIO

import chardet
import numpy as np

from app import DEFAULTS

COLUMN_NAMES = {
    # Для последовательности a (внешние веса)
    **{k: 'a' for k in [
        # Русские варианты
        'а', 'a_k', 'вес', 'внешний вес', 'внешний_вес', 'веса а', 'последовательность a',

        # Английские варианты
        'a', 'ak', 'outer', 'outer weight', 'outer_weight', 'weight_a', 'weights a',
    ]},

    # Для последовательности b (внутренние веса)
    **{k: 'b' for k in [
        # Русские варианты
        'б', 'b_k', 'внутренний вес', 'внутренний_вес', 'веса б', 'последовательность b',

        # Английские варианты
        'b', 'bk', 'inner', 'inner weight', 'inner_weight', 'weight_b', 'weights b',
    ]},

    # Индекс, если он есть в файле
    **{k: 'k' for k in [
        'индекс', 'номер', 'k', 'index', 'idx', 'n',
    ]},
}

REQUIRED_COLUMNS = ['a', 'b']


def validate_file(path):
    """Проверяем файл перед обработкой"""
    if not path:
        return False, 'Файл не указан'
    if not os.path.isfile(path):
        return False, f'Файл не найден: {path}'
    if os.path.splitext(path)[1].lower().lstrip('.') not in DEFAULTS['ALLOWED_EXTENSIONS']:
        return False, 'Разрешены только CSV-файлы'
    return True, ''


def standardize_columns(csv_data):
    """Приводим названия колонок к стандартному виду"""
    standardized_data = []
    for row in csv_data:
        new_row = {}
        for original_key, value in row.items():
            if original_key is None:
                continue
            lower_key = original_key.lower().strip()
            if lower_key in COLUMN_NAMES:
                new_row[COLUMN_NAMES[lower_key]] = (value or '').strip()
        standardized_data.append(new_row)
    return standardized_data


def check_required_columns(data):
    """Проверяем наличие колонок a и b"""
    if not data:
        return False, 'Файл пуст после стандартизации'

    missing = [col for col in REQUIRED_COLUMNS if col not in data[0]]
    if missing:
        return False, f'Не хватает обязательных колонок: {", ".join(missing)}'
    return True, ''


def parse_values(data):
    """Переводим значения в числа; десятичная запятая допускается"""
    columns = {col: [] for col in REQUIRED_COLUMNS}
    for i, row in enumerate(data, start=1):
        for col in REQUIRED_COLUMNS:
            raw = row.get(col, '')
            if not raw:
                return None, f'Пустое значение в колонке "{col}", строка {i}'
            try:
                value = float(raw.replace(',', '.'))
            except ValueError:
                return None, f'Не число в колонке "{col}", строка {i}: {raw}'
            if not np.isfinite(value) or value < 0:
                return None, f'Значения должны быть конечными и неотрицательными: "{col}", строка {i}'
            columns[col].append(value)
    return {col: np.array(values) for col, values in columns.items()}, ''


def read_sequences(path):
    """Чтение последовательностей a и b из CSV для дискретного неравенства Харди.

    Кодировка определяется через chardet, разделитель через csv.Sniffer.

    Returns:
        dict: {'status': 'success', 'a': ndarray, 'b': ndarray, 'N': int, ...}
            или {'status': 'error', 'message': ...}
    """
    is_valid, error = validate_file(path)
    if not is_valid:
        return {'status': 'error', 'message': error}

    try:
        # Чтение файла
        with open(path, 'rb') as f:
            raw_data = f.read()
        encoding = chardet.detect(raw_data)['encoding'] or 'utf-8'
        file_content = raw_data.decode(encoding, errors='replace').lstrip('\ufeff')

        # Автоопределение разделителя
        sample = file_content[:1024]
        sniffer = csv.Sniffer()
        try:
            dialect = sniffer.sniff(sample, delimiters=";,|\t")
        except csv.Error:
            dialect = csv.get_dialect('excel')
        csv_data = list(csv.DictReader(StringIO(file_content), dialect=dialect))

        if not csv_data:
            return {'status': 'error', 'message': 'Файл пуст или не содержит данных'}

        standardized_data = standardize_columns(csv_data)

        is_valid, error = check_required_columns(standardized_data)
        if not is_valid:
            return {'status': 'error', 'message': error}

        columns, error = parse_values(standardized_data)
        if columns is None:
            return {'status': 'error', 'message': error}

        first_index = standardized_data[0].get('k')
        N = int(float(first_index)) if first_index else 0

        return {
            'status': 'success',
            'message': 'Файл успешно обработан',
            'filename': os.path.basename(path),
            'encoding': encoding,
            'a': columns['a'],
            'b': columns['b'],
            'N': N,
        }

    except Exception as e:
        return {'status': 'error', 'message': f'Ошибка обработки файла: {str(e)}'}
