#!/usr/bin/env python3
# Copyright 2026 The keyret Authors.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Builds data/humaneval_mini.jsonl, the filler corpus used by tests.

A small HumanEval-style slice: a handful of verbatim originals plus
synthetic docstringed utilities in the same shape. Every record fuses
prompt + canonical_solution into one self-contained function.
"""

import json
import os

HUMANEVAL = [
    {
        "task_id": "HumanEval/162",
        "entry_point": "string_to_md5",
        "prompt": """
def string_to_md5(text):
    \"\"\"
    Given a string 'text', return its md5 hash equivalent string.
    If 'text' is an empty string, return None.

    >>> string_to_md5('Hello world') == '3e25960a79dbc69b674cd4ec67a72c62'
    \"\"\"
""",
        "canonical_solution": """    import hashlib
    return hashlib.md5(text.encode('ascii')).hexdigest() if text else None
""",
        "test": "def check(candidate):\n    assert candidate('Hello world') == '3e25960a79dbc69b674cd4ec67a72c62'\n    assert candidate('') is None\n",
    },
    {
        "task_id": "HumanEval/98",
        "entry_point": "count_upper",
        "prompt": """
def count_upper(s):
    \"\"\"
    Given a string s, count the number of uppercase vowels in even indices.

    For example:
    count_upper('aBCdEf') returns 1
    count_upper('abcdefg') returns 0
    count_upper('dBBE') returns 0
    \"\"\"
""",
        "canonical_solution": """    count = 0
    for i in range(0,len(s),2):
        if s[i] in "AEIOU":
            count += 1
    return count
""",
        "test": "def check(candidate):\n    assert candidate('aBCdEf') == 1\n    assert candidate('abcdefg') == 0\n",
    },
    {
        "task_id": "HumanEval/121",
        "entry_point": "solution",
        "prompt": """
def solution(lst):
    \"\"\"Given a non-empty list of integers, return the sum of all of the odd elements that are in even positions.


    Examples
    solution([5, 8, 7, 1]) ==> 12
    solution([3, 3, 3, 3, 3]) ==> 9
    solution([30, 13, 24, 321]) ==>0
    \"\"\"
""",
        "canonical_solution": """    return sum([x for idx, x in enumerate(lst) if idx%2==0 and x%2==1])
""",
        "test": "def check(candidate):\n    assert candidate([5, 8, 7, 1]) == 12\n    assert candidate([3, 3, 3, 3, 3]) == 9\n",
    },
    {
        "task_id": "HumanEval/102",
        "entry_point": "choose_num",
        "prompt": """
def choose_num(x, y):
    \"\"\"This function takes two positive numbers x and y and returns the
    biggest even integer number that is in the range [x, y] inclusive. If
    there's no such number, then the function should return -1.

    For example:
    choose_num(12, 15) = 14
    choose_num(13, 12) = -1
    \"\"\"
""",
        "canonical_solution": """    if x > y:
        return -1
    if y % 2 == 0:
        return y
    if x == y:
        return -1
    return y - 1
""",
        "test": "def check(candidate):\n    assert candidate(12, 15) == 14\n    assert candidate(13, 12) == -1\n",
    },
    {
        "task_id": "HumanEval/66",
        "entry_point": "digitSum",
        "prompt": """
def digitSum(s):
    \"\"\"Task
    Write a function that takes a string as input and returns the sum of the upper characters only'
    ASCII codes.

    Examples:
        digitSum("") => 0
        digitSum("abAB") => 131
        digitSum("abcCd") => 67
        digitSum("helloE") => 69
        digitSum("woArBld") => 131
        digitSum("aAaaaXa") => 153
    \"\"\"
""",
        "canonical_solution": """    if s == "": return 0
    return sum(ord(char) if char.isupper() else 0 for char in s)
""",
        "test": "def check(candidate):\n    assert candidate('') == 0\n    assert candidate('abAB') == 131\n",
    },
    {
        "task_id": "HumanEval/97",
        "entry_point": "multiply",
        "prompt": """
def multiply(a, b):
    \"\"\"Complete the function that takes two integers and returns
    the product of their unit digits.
    Assume the input is always valid.
    Examples:
    multiply(148, 412) should return 16.
    multiply(19, 28) should return 72.
    multiply(2020, 1851) should return 0.
    multiply(14,-15) should return 20.
    \"\"\"
""",
        "canonical_solution": """    return abs(a % 10) * abs(b % 10)
""",
        "test": "def check(candidate):\n    assert candidate(148, 412) == 16\n    assert candidate(19, 28) == 72\n",
    },
    {
        "task_id": "HumanEval/157",
        "entry_point": "right_angle_triangle",
        "prompt": """
def right_angle_triangle(a, b, c):
    '''
    Given the lengths of the three sides of a triangle. Return True if the three
    sides form a right-angled triangle, False otherwise.
    A right-angled triangle is a triangle in which one angle is right angle or
    90 degree.
    Example:
    right_angle_triangle(3, 4, 5) == True
    right_angle_triangle(1, 2, 3) == False
    '''
""",
        "canonical_solution": """    return a*a == b*b + c*c or b*b == a*a + c*c or c*c == a*a + b*b
""",
        "test": "def check(candidate):\n    assert candidate(3, 4, 5) == True\n    assert candidate(1, 2, 3) == False\n",
    },
    {
        "task_id": "HumanEval/122",
        "entry_point": "add_elements",
        "prompt": """
def add_elements(arr, k):
    \"\"\"
    Given a non-empty array of integers arr and an integer k, return
    the sum of the elements with at most two digits from the first k elements of arr.

    Example:

        Input: arr = [111,21,3,4000,5,6,7,8,9], k = 4
        Output: 24 # sum of 21 + 3

    Constraints:
        1. 1 <= len(arr) <= 100
        2. 1 <= k <= len(arr)
    \"\"\"
""",
        "canonical_solution": """    return sum(elem for elem in arr[:k] if len(str(elem)) <= 2)
""",
        "test": "def check(candidate):\n    assert candidate([111,21,3,4000,5,6,7,8,9], 4) == 24\n",
    },
    {
        "task_id": "HumanEval/155",
        "entry_point": "even_odd_count",
        "prompt": """
def even_odd_count(num):
    \"\"\"Given an integer. return a tuple that has the number of even and odd digits respectively.

     Example:
        even_odd_count(-12) ==> (1, 1)
        even_odd_count(123) ==> (1, 2)
    \"\"\"
""",
        "canonical_solution": """    even_count = 0
    odd_count = 0
    for i in str(abs(num)):
        if int(i)%2==0:
            even_count +=1
        else:
            odd_count +=1
    return (even_count, odd_count)
""",
        "test": "def check(candidate):\n    assert candidate(-12) == (1, 1)\n    assert candidate(123) == (1, 2)\n",
    },
    {
        "task_id": "HumanEval/114",
        "entry_point": "minSubArraySum",
        "prompt": """
def minSubArraySum(nums):
    \"\"\"
    Given an array of integers nums, find the minimum sum of any non-empty sub-array
    of nums.
    Example
    minSubArraySum([2, 3, 4, 1, 2, 4]) == 1
    minSubArraySum([-1, -2, -3]) == -6
    \"\"\"
""",
        "canonical_solution": """    max_sum = 0
    s = 0
    for num in nums:
        s += -num
        if (s < 0):
            s = 0
        max_sum = max(s, max_sum)
    if max_sum == 0:
        max_sum = max(-i for i in nums)
    min_sum = -max_sum
    return min_sum
""",
        "test": "def check(candidate):\n    assert candidate([2, 3, 4, 1, 2, 4]) == 1\n    assert candidate([-1, -2, -3]) == -6\n",
    },
    {
        "task_id": "HumanEval/77",
        "entry_point": "iscube",
        "prompt": """
def iscube(a):
    '''
    Write a function that takes an integer a and returns True
    if this ingeger is a cube of some integer number.
    Note: you may assume the input is always valid.
    Examples:
    iscube(1) ==> True
    iscube(2) ==> False
    iscube(-1) ==> True
    iscube(64) ==> True
    iscube(0) ==> True
    iscube(180) ==> False
    '''
""",
        "canonical_solution": """    a = abs(a)
    return int(round(a ** (1. / 3))) ** 3 == a
""",
        "test": "def check(candidate):\n    assert candidate(1) == True\n    assert candidate(2) == False\n",
    },
    {
        "task_id": "HumanEval/139",
        "entry_point": "special_factorial",
        "prompt": """
def special_factorial(n):
    \"\"\"The Brazilian factorial is defined as:
    brazilian_factorial(n) = n! * (n-1)! * (n-2)! * ... * 1!
    where n > 0

    For example:
    >>> special_factorial(4)
    288

    The function will receive an integer as input and should return the special
    factorial of this integer.
    \"\"\"
""",
        "canonical_solution": """    fact_i = 1
    special_fact = 1
    for i in range(1, n+1):
        fact_i *= i
        special_fact *= fact_i
    return special_fact
""",
        "test": "def check(candidate):\n    assert candidate(4) == 288\n",
    },
    {
        "task_id": "HumanEval/138",
        "entry_point": "is_equal_to_sum_even",
        "prompt": """
def is_equal_to_sum_even(n):
    \"\"\"Evaluate whether the given number n can be written as the sum of exactly 4 positive even numbers
    Example
    is_equal_to_sum_even(4) == False
    is_equal_to_sum_even(6) == False
    is_equal_to_sum_even(8) == True
    \"\"\"
""",
        "canonical_solution": """    return n%2 == 0 and n >= 8
""",
        "test": "def check(candidate):\n    assert candidate(4) == False\n    assert candidate(8) == True\n",
    },
]


def synthetic_records():
    """Synthetic fillers: same shape, varied bodies, self-contained."""
    records = []

    def add(name, params, doc_lines, body_lines, example=None):
        prompt = f"\ndef {name}({params}):\n"
        prompt += f"    \"\"\"{doc_lines[0]}\n"
        for d in doc_lines[1:]:
            prompt += ("    " + d).rstrip() + "\n"
        prompt += "    \"\"\"\n"
        body = ""
        for b in body_lines:
            body += ("    " + b).rstrip() + "\n"
        records.append(
            {
                "task_id": f"mini/{len(records)}",
                "entry_point": name,
                "prompt": prompt,
                "canonical_solution": body,
                "test": example
                or f"def check(candidate):\n    assert candidate is not None\n",
            }
        )

    nouns = [
        ("totals", "values"), ("weights", "samples"), ("scores", "entries"),
        ("prices", "items"), ("lengths", "words"), ("depths", "nodes"),
        ("counts", "tokens"), ("offsets", "records"), ("ranks", "players"),
        ("ages", "people"), ("sizes", "files"), ("delays", "events"),
    ]

    for i, (noun, of) in enumerate(nouns):
        add(
            f"running_{noun}",
            of,
            [
                f"Return the running sums of {of}.",
                "",
                f"The i-th element of the result is the sum of the first",
                f"i+1 {of}. An empty input gives an empty list.",
                "",
                f"Example: running_{noun}([1, 2, 3]) -> [1, 3, 6]",
            ],
            [
                "out = []",
                "acc = 0",
                f"for v in {of}:",
                "    acc += v",
                "    out.append(acc)",
                "return out",
            ],
        )
        add(
            f"clamp_{noun}",
            f"{of}, low, high",
            [
                f"Clamp every value in {of} into [low, high].",
                "",
                "Values below low become low, values above high become",
                "high, everything else is kept as is.",
                "",
                f"Example: clamp_{noun}([1, 9], 2, 5) -> [2, 5]",
            ],
            [
                "result = []",
                f"for v in {of}:",
                "    if v < low:",
                "        result.append(low)",
                "    elif v > high:",
                "        result.append(high)",
                "    else:",
                "        result.append(v)",
                "return result",
            ],
        )
        add(
            f"median_of_{noun}",
            of,
            [
                f"Return the median of {of}.",
                "",
                "For an even number of values the lower median is used.",
                "The input must not be empty and is not modified.",
                "",
                f"Example: median_of_{noun}([5, 1, 3]) -> 3",
            ],
            [
                f"ordered = sorted({of})",
                "mid = (len(ordered) - 1) // 2",
                "return ordered[mid]",
            ],
        )
        add(
            f"spread_of_{noun}",
            of,
            [
                f"Return max minus min over {of}.",
                "",
                "A single value has spread 0. The input must be",
                "non-empty; no copy of the list is made.",
                "",
                f"Example: spread_of_{noun}([4, 9, 6]) -> 5",
            ],
            [
                f"lo = {of}[0]",
                f"hi = {of}[0]",
                f"for v in {of}[1:]:",
                "    if v < lo:",
                "        lo = v",
                "    if v > hi:",
                "        hi = v",
                "return hi - lo",
            ],
        )
        add(
            f"top_three_{noun}",
            of,
            [
                f"Return the three largest {of} in descending order.",
                "",
                "Fewer than three values are all returned, still",
                "sorted from largest to smallest. Duplicates are",
                "kept.",
                "",
                f"Example: top_three_{noun}([4, 1, 9, 6]) -> [9, 6, 4]",
            ],
            [
                f"ordered = sorted({of}, reverse=True)",
                "return ordered[:3]",
            ],
        )
        add(
            f"count_above_{noun}",
            f"{of}, cutoff",
            [
                f"Count how many {of} lie strictly above cutoff.",
                "",
                "The comparison is strict; values equal to the",
                "cutoff are not counted.",
                "",
                f"Example: count_above_{noun}([2, 5, 8], 4) -> 2",
            ],
            [
                "n = 0",
                f"for v in {of}:",
                "    if v > cutoff:",
                "        n += 1",
                "return n",
            ],
        )
        add(
            f"scale_{noun}",
            f"{of}, factor",
            [
                f"Multiply every one of the {of} by factor.",
                "",
                "Returns a new list; the original is untouched.",
                "factor may be fractional or negative, results are",
                "not rounded.",
                "",
                f"Example: scale_{noun}([1, 2, 3], 2) -> [2, 4, 6]",
            ],
            [
                f"return [v * factor for v in {of}]",
            ],
        )
        add(
            f"alternating_sum_{noun}",
            of,
            [
                f"Sum the {of} with alternating signs.",
                "",
                "The first value is added, the second subtracted,",
                "and so on. An empty input sums to 0.",
                "",
                f"Example: alternating_sum_{noun}([5, 3, 2]) -> 4",
            ],
            [
                "total = 0",
                "sign = 1",
                f"for v in {of}:",
                "    total += sign * v",
                "    sign = -sign",
                "return total",
            ],
        )
    text_jobs = [
        ("collapse_spaces", "text",
         ["Collapse runs of spaces in text to a single space.",
          "",
          "Leading and trailing spaces are removed as well, so",
          "collapse_spaces('  a   b ') returns 'a b'."],
         ["parts = [p for p in text.split(' ') if p]",
          "return ' '.join(parts)"]),
        ("count_vowel_words", "words",
         ["Count the words that start with a vowel.",
          "",
          "The check is case-insensitive; empty strings in the",
          "input are ignored.",
          "",
          "Example: count_vowel_words(['ant', 'Bee', 'owl']) -> 2"],
         ["total = 0",
          "for w in words:",
          "    if w and w[0].lower() in 'aeiou':",
          "        total += 1",
          "return total"]),
        ("longest_prefix", "a, b",
         ["Return the longest common prefix of a and b.",
          "",
          "Either argument may be empty, in which case the prefix",
          "is empty too.",
          "",
          "Example: longest_prefix('stairs', 'stable') -> 'sta'"],
         ["n = min(len(a), len(b))",
          "i = 0",
          "while i < n and a[i] == b[i]:",
          "    i += 1",
          "return a[:i]"]),
        ("swap_case_digits", "text",
         ["Swap letter case and mirror digits in text.",
          "",
          "Letters change case, digits d become 9 - d, anything",
          "else is untouched.",
          "",
          "Example: swap_case_digits('aB3') -> 'Ab6'"],
         ["out = []",
          "for c in text:",
          "    if c.isalpha():",
          "        out.append(c.swapcase())",
          "    elif c.isdigit():",
          "        out.append(str(9 - int(c)))",
          "    else:",
          "        out.append(c)",
          "return ''.join(out)"]),
        ("initials", "full_name",
         ["Return the upper-case initials of full_name.",
          "",
          "Words are separated by whitespace; a dot follows each",
          "initial.",
          "",
          "Example: initials('ada byron lovelace') -> 'A.B.L.'"],
         ["letters = [w[0].upper() for w in full_name.split() if w]",
          "return ''.join(l + '.' for l in letters)"]),
        ("strip_quotes", "text",
         ["Remove one layer of matching quotes around text.",
          "",
          "Both single and double quotes count; unmatched or",
          "absent quotes leave the text unchanged."],
         ["if len(text) >= 2 and text[0] == text[-1] and text[0] in '\\'\"':",
          "    return text[1:-1]",
          "return text"]),
        ("tail_words", "sentence, n",
         ["Return the last n words of sentence as a string.",
          "",
          "Words are whitespace-separated. If n exceeds the word",
          "count the whole sentence is returned.",
          "",
          "Example: tail_words('one two three', 2) -> 'two three'"],
         ["words = sentence.split()",
          "if n >= len(words):",
          "    return ' '.join(words)",
          "return ' '.join(words[len(words) - n:])"]),
        ("hide_email", "address",
         ["Mask the local part of an email address.",
          "",
          "Everything before the @ except the first letter becomes",
          "stars. Without an @ the address is returned untouched.",
          "",
          "Example: hide_email('karl@host') -> 'k***@host'"],
         ["at = address.find('@')",
          "if at <= 1:",
          "    return address",
          "return address[0] + '*' * (at - 1) + address[at:]"]),
    ]
    for name, params, doc, body in text_jobs:
        add(name, params, doc, body)

    numeric_jobs = [
        ("digits_reversed", "n",
         ["Return n with its decimal digits reversed.",
          "",
          "The sign is preserved and leading zeros vanish, so",
          "digits_reversed(-120) returns -21."],
         ["sign = -1 if n < 0 else 1",
          "rev = int(str(abs(n))[::-1])",
          "return sign * rev"]),
        ("triangle_number", "n",
         ["Return the n-th triangle number.",
          "",
          "That is the sum 1 + 2 + ... + n, with n assumed to be",
          "nonnegative.",
          "",
          "Example: triangle_number(4) -> 10"],
         ["return n * (n + 1) // 2"]),
        ("wrap_index", "i, size",
         ["Wrap index i into the range [0, size).",
          "",
          "Negative indices count from the end the way list",
          "indexing does; size must be positive."],
         ["return i % size"]),
        ("mean_rounded", "values",
         ["Return the arithmetic mean rounded to two decimals.",
          "",
          "The input must be non-empty. Uses ordinary half-up",
          "rounding as provided by round().",
          "",
          "Example: mean_rounded([1, 2]) -> 1.5"],
         ["return round(sum(values) / len(values), 2)"]),
        ("powers_below", "base, limit",
         ["List the powers of base that stay below limit.",
          "",
          "Starts at base**1; base must be at least 2 and limit",
          "positive.",
          "",
          "Example: powers_below(3, 30) -> [3, 9, 27]"],
         ["out = []",
          "p = base",
          "while p < limit:",
          "    out.append(p)",
          "    p *= base",
          "return out"]),
        ("closest_to_zero", "values",
         ["Return the value closest to zero.",
          "",
          "Ties between a negative and a positive value of equal",
          "magnitude resolve to the positive one. Input must be",
          "non-empty.",
          "",
          "Example: closest_to_zero([-2, 2, 3]) -> 2"],
         ["best = values[0]",
          "for v in values[1:]:",
          "    if abs(v) < abs(best):",
          "        best = v",
          "    elif abs(v) == abs(best) and v > best:",
          "        best = v",
          "return best"]),
        ("digit_product", "n",
         ["Multiply the decimal digits of n together.",
          "",
          "The sign of n is ignored and a single-digit number is",
          "its own product; digit_product(0) is 0.",
          "",
          "Example: digit_product(234) -> 24"],
         ["result = 1",
          "for d in str(abs(n)):",
          "    result *= int(d)",
          "return result"]),
        ("is_perfect_square", "n",
         ["Tell whether n is a perfect square.",
          "",
          "Negative numbers are never perfect squares. The check",
          "is exact integer arithmetic, no floating point.",
          "",
          "Example: is_perfect_square(49) -> True"],
         ["if n < 0:",
          "    return False",
          "r = int(n ** 0.5)",
          "while r * r < n:",
          "    r += 1",
          "return r * r == n"]),
        ("gcd_pair", "a, b",
         ["Return the greatest common divisor of a and b.",
          "",
          "Standard Euclid; gcd_pair(0, 0) is defined as 0 and",
          "the result is never negative.",
          "",
          "Example: gcd_pair(12, 18) -> 6"],
         ["a = abs(a)",
          "b = abs(b)",
          "while b:",
          "    a, b = b, a % b",
          "return a"]),
        ("bits_set", "n",
         ["Count the one bits in the binary form of n.",
          "",
          "n must be nonnegative; bits_set(0) is 0.",
          "",
          "Example: bits_set(13) -> 3"],
         ["count = 0",
          "while n:",
          "    count += n & 1",
          "    n >>= 1",
          "return count"]),
    ]
    for name, params, doc, body in numeric_jobs:
        add(name, params, doc, body)

    list_jobs = [
        ("dedupe_keep_order", "items",
         ["Drop duplicates from items, keeping first appearances.",
          "",
          "Order is otherwise preserved and the input list is not",
          "modified. Elements must be hashable.",
          "",
          "Example: dedupe_keep_order([2, 1, 2, 3]) -> [2, 1, 3]"],
         ["seen = set()",
          "out = []",
          "for x in items:",
          "    if x not in seen:",
          "        seen.add(x)",
          "        out.append(x)",
          "return out"]),
        ("chunk_list", "items, size",
         ["Split items into consecutive chunks of the given size.",
          "",
          "The final chunk may be shorter. size must be a positive",
          "integer.",
          "",
          "Example: chunk_list([1, 2, 3, 4, 5], 2) -> [[1, 2], [3, 4], [5]]"],
         ["return [items[i:i + size] for i in range(0, len(items), size)]"]),
        ("interleave", "a, b",
         ["Interleave two lists element by element.",
          "",
          "When one list runs out the remainder of the other is",
          "appended unchanged.",
          "",
          "Example: interleave([1, 3], [2, 4, 6]) -> [1, 2, 3, 4, 6]"],
         ["out = []",
          "n = min(len(a), len(b))",
          "for i in range(n):",
          "    out.append(a[i])",
          "    out.append(b[i])",
          "out.extend(a[n:])",
          "out.extend(b[n:])",
          "return out"]),
        ("rotate_left", "items, k",
         ["Rotate items k places to the left.",
          "",
          "k may exceed the length; the input list itself is left",
          "untouched and a new list is returned.",
          "",
          "Example: rotate_left([1, 2, 3, 4], 1) -> [2, 3, 4, 1]"],
         ["if not items:",
          "    return []",
          "k = k % len(items)",
          "return items[k:] + items[:k]"]),
        ("second_largest", "values",
         ["Return the second largest distinct value.",
          "",
          "The input needs at least two distinct values; duplicates",
          "of the maximum do not count twice.",
          "",
          "Example: second_largest([4, 9, 9, 6]) -> 6"],
         ["distinct = sorted(set(values))",
          "return distinct[-2]"]),
        ("split_by_sign", "values",
         ["Split values into (negatives, zeros, positives).",
          "",
          "Each part keeps the original relative order of its",
          "elements.",
          "",
          "Example: split_by_sign([-1, 0, 2]) -> ([-1], [0], [2])"],
         ["neg = [v for v in values if v < 0]",
          "zero = [v for v in values if v == 0]",
          "pos = [v for v in values if v > 0]",
          "return (neg, zero, pos)"]),
        ("pairwise_sums", "values",
         ["Return sums of adjacent pairs in values.",
          "",
          "A list of n values yields n - 1 sums; fewer than two",
          "values yield an empty list.",
          "",
          "Example: pairwise_sums([1, 4, 9]) -> [5, 13]"],
         ["return [values[i] + values[i + 1] for i in range(len(values) - 1)]"]),
        ("index_of_max", "values",
         ["Return the index of the first maximum in values.",
          "",
          "The input must be non-empty. Later duplicates of the",
          "maximum are ignored.",
          "",
          "Example: index_of_max([3, 7, 7, 1]) -> 1"],
         ["best = 0",
          "for i in range(1, len(values)):",
          "    if values[i] > values[best]:",
          "        best = i",
          "return best"]),
    ]
    for name, params, doc, body in list_jobs:
        add(name, params, doc, body)

    misc = [
        ("leap_year", "year",
         ["Tell whether year is a leap year.",
          "",
          "Gregorian rules: divisible by 4, except centuries not",
          "divisible by 400.",
          "",
          "Example: leap_year(2000) -> True"],
         ["if year % 400 == 0:",
          "    return True",
          "if year % 100 == 0:",
          "    return False",
          "return year % 4 == 0"]),
        ("roman_units", "n",
         ["Spell the units digit of n in Roman numerals.",
          "",
          "Only 0 through 9 of the final digit matter; 0 gives an",
          "empty string.",
          "",
          "Example: roman_units(24) -> 'IV'"],
         ["table = ['', 'I', 'II', 'III', 'IV', 'V', 'VI', 'VII', 'VIII', 'IX']",
          "return table[abs(n) % 10]"]),
        ("fizz_word", "n",
         ["Classic divisibility wording for n.",
          "",
          "Multiples of 15 give 'fizzbuzz', of 3 'fizz', of 5",
          "'buzz'; anything else returns the number as a string."],
         ["if n % 15 == 0:",
          "    return 'fizzbuzz'",
          "if n % 3 == 0:",
          "    return 'fizz'",
          "if n % 5 == 0:",
          "    return 'buzz'",
          "return str(n)"]),
        ("grade_letter", "score",
         ["Map a numeric score to a letter grade.",
          "",
          "90 and above is A, then B from 80, C from 70, D from 60",
          "and F below that. Scores outside 0..100 are clamped",
          "first."],
         ["score = max(0, min(100, score))",
          "if score >= 90:",
          "    return 'A'",
          "if score >= 80:",
          "    return 'B'",
          "if score >= 70:",
          "    return 'C'",
          "if score >= 60:",
          "    return 'D'",
          "return 'F'"]),
        ("seconds_to_clock", "total",
         ["Format a second count as H:MM:SS.",
          "",
          "total must be nonnegative; hours have no leading zero.",
          "",
          "Example: seconds_to_clock(3671) -> '1:01:11'"],
         ["h = total // 3600",
          "m = (total % 3600) // 60",
          "s = total % 60",
          "return '%d:%02d:%02d' % (h, m, s)"]),
        ("caesar_shift", "text, k",
         ["Shift letters in text by k positions.",
          "",
          "Case is preserved and non-letters pass through. k may",
          "be negative or large.",
          "",
          "Example: caesar_shift('abz', 1) -> 'bca'"],
         ["out = []",
          "for c in text:",
          "    if c.islower():",
          "        out.append(chr((ord(c) - 97 + k) % 26 + 97))",
          "    elif c.isupper():",
          "        out.append(chr((ord(c) - 65 + k) % 26 + 65))",
          "    else:",
          "        out.append(c)",
          "return ''.join(out)"]),
        ("balanced_brackets", "text",
         ["Check that round brackets in text are balanced.",
          "",
          "Other characters are ignored. An empty string counts",
          "as balanced.",
          "",
          "Example: balanced_brackets('(a(b))') -> True"],
         ["depth = 0",
          "for c in text:",
          "    if c == '(':",
          "        depth += 1",
          "    elif c == ')':",
          "        depth -= 1",
          "        if depth < 0:",
          "            return False",
          "return depth == 0"]),
        ("luhn_checksum", "digits",
         ["Compute the Luhn checksum of a digit string.",
          "",
          "Every second digit from the right is doubled, digits of",
          "the products are summed, and the total modulo 10 is",
          "returned (0 for a valid number)."],
         ["total = 0",
          "for i, c in enumerate(reversed(digits)):",
          "    d = int(c)",
          "    if i % 2 == 1:",
          "        d *= 2",
          "        if d > 9:",
          "            d -= 9",
          "    total += d",
          "return total % 10"]),
    ]
    for name, params, doc, body in misc:
        add(name, params, doc, body)

    return records


def main():
    here = os.path.dirname(os.path.abspath(__file__))
    out_path = os.path.join(here, "..", "data", "humaneval_mini.jsonl")
    os.makedirs(os.path.dirname(out_path), exist_ok=True)
    records = HUMANEVAL + synthetic_records()
    names = [r["entry_point"] for r in records]
    assert len(names) == len(set(names)), "duplicate entry points"
    total = 0
    with open(out_path, "w") as f:
        for r in records:
            line = json.dumps(r)
            f.write(line + "\n")
            total += len(r["prompt"]) + len(r["canonical_solution"])
    print(f"{len(records)} records, {total} bytes of function text")
    assert total >= 50000, "corpus too small for large token budgets"


if __name__ == "__main__":
    main()
