# -*- coding: utf-8 -*-
# @Time    : 2026/10/18 20:05
# @File    : pdf_fixtures.py
# @Software: PyCharm
from typing import Sequence

"""
生成测试用的最小 PDF：每页一段 Helvetica 文本，空字符串表示没有文本层的页
"""


def _escape(text: str) -> str:
    return text.replace('\\', '\\\\').replace('(', '\\(').replace(')', '\\)')


def _content_stream(text: str) -> bytes:
    if not text:
        return b''
    ops = ['BT', '/F1 12 Tf', '14 TL', '72 720 Td']
    for i, line in enumerate(text.split('\n')):
        if i:
            ops.append('T*')
        ops.append(f'({_escape(line)}) Tj')
    ops.append('ET')
    return '\n'.join(ops).encode('latin-1')


def pdf_bytes(pages: Sequence[str]) -> bytes:
    page_ids = [4 + 2 * i for i in range(len(pages))]
    kids = ' '.join(f'{page_id} 0 R' for page_id in page_ids)
    objects = [
        b'<< /Type /Catalog /Pages 2 0 R >>',
        f'<< /Type /Pages /Kids [{kids}] /Count {len(pages)} >>'.encode(),
        b'<< /Type /Font /Subtype /Type1 /BaseFont /Helvetica >>',
    ]
    for page_id, text in zip(page_ids, pages):
        objects.append((f'<< /Type /Page /Parent 2 0 R /MediaBox [0 0 612 792] '
                        f'/Resources << /Font << /F1 3 0 R >> >> /Contents {page_id + 1} 0 R >>').encode())
        stream = _content_stream(text)
        objects.append(b'<< /Length %d >>\nstream\n' % len(stream) + stream + b'\nendstream')

    out = bytearray(b'%PDF-1.4\n')
    offsets = []
    for number, body in enumerate(objects, start=1):
        offsets.append(len(out))
        out += b'%d 0 obj\n' % number + body + b'\nendobj\n'
    xref = len(out)
    out += b'xref\n0 %d\n' % (len(objects) + 1)
    out += b'0000000000 65535 f \n'
    for offset in offsets:
        out += b'%010d 00000 n \n' % offset
    out += b'trailer\n<< /Size %d /Root 1 0 R >>\nstartxref\n%d\n%%%%EOF\n' % (len(objects) + 1, xref)
    return bytes(out)


def write_pdf(path, *pages: str):
    with open(path, 'wb') as f:
        f.write(pdf_bytes(pages))
    return path
